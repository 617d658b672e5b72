// Copyright 2026 The ORMind Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ormind/model_ir.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <regex>

namespace ormind {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kSyntaxError: return "SyntaxError";
    case ErrorCode::kUnknownVariable: return "UnknownVariable";
    case ErrorCode::kMultipleRelations: return "MultipleRelations";
    case ErrorCode::kDocumentMalformed: return "DocumentMalformed";
    case ErrorCode::kDuplicateName: return "DuplicateName";
    case ErrorCode::kMissingAssignment: return "MissingAssignment";
    case ErrorCode::kStatusNotOptimal: return "StatusNotOptimal";
    case ErrorCode::kNoModificationsNeeded: return "NoModificationsNeeded";
    case ErrorCode::kStageParseError: return "StageParseError";
    case ErrorCode::kTransport: return "Transport";
    case ErrorCode::kFixtureMiss: return "FixtureMiss";
    case ErrorCode::kScriptExhausted: return "ScriptExhausted";
    case ErrorCode::kStorageWrite: return "StorageWrite";
    case ErrorCode::kEmptyDataset: return "EmptyDataset";
    case ErrorCode::kFormatError: return "FormatError";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

std::string_view to_string(VarKind kind) {
  return kind == VarKind::kInteger ? "integer" : "continuous";
}

std::string_view to_string(Sense sense) {
  switch (sense) {
    case Sense::kLE: return "<=";
    case Sense::kGE: return ">=";
    case Sense::kEQ: return "=";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// LinExpr

void LinExpr::add_term(const std::string& name, double coef) {
  for (auto& [n, c] : terms) {
    if (n == name) {
      c += coef;
      return;
    }
  }
  terms.emplace_back(name, coef);
}

void LinExpr::add(const LinExpr& other, double scale) {
  for (const auto& [n, c] : other.terms) add_term(n, c * scale);
  constant += other.constant * scale;
}

void LinExpr::scale(double factor) {
  for (auto& term : terms) term.second *= factor;
  constant *= factor;
}

double LinExpr::coefficient(std::string_view name) const {
  for (const auto& [n, c] : terms) {
    if (n == name) return c;
  }
  return 0.0;
}

namespace {

// Drops binary noise left by decimal arithmetic (1 - 0.7 -> 0.3).
double snap(double v) {
  if (!std::isfinite(v) || v == 0.0) return v;
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
  double out = v;
  std::from_chars(buf, res.ptr, out);
  return out;
}

}  // namespace

void LinExpr::normalize() {
  // Coefficients that cancel up to rounding (e.g. 0.7 - 0.7 through
  // different paths) are treated as zero.
  std::erase_if(terms, [](const auto& t) { return std::abs(t.second) <= 1e-12; });
  for (auto& t : terms) t.second = snap(t.second);
  constant = snap(constant);
}

// ---------------------------------------------------------------------------
// ModelIR

const VariableDef* ModelIR::find_variable(std::string_view name) const {
  for (const auto& v : variables) {
    if (v.name == name) return &v;
  }
  return nullptr;
}

std::set<std::string> ModelIR::variable_names() const {
  std::set<std::string> out;
  for (const auto& v : variables) out.insert(v.name);
  return out;
}

double evaluate(const LinExpr& expr, const Assignment& assignment) {
  double total = expr.constant;
  for (const auto& [name, coef] : expr.terms) {
    auto it = assignment.find(name);
    if (it == assignment.end()) {
      throw Error(ErrorCode::kMissingAssignment,
                  "assignment has no value for '" + name + "'", {}, name);
    }
    total += coef * it->second;
  }
  return total;
}

double constraint_violation(Sense sense, double achieved, double required) {
  switch (sense) {
    case Sense::kLE: return achieved - required;
    case Sense::kGE: return required - achieved;
    case Sense::kEQ: return std::abs(achieved - required);
  }
  return 0.0;
}

std::string format_number(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) return "0";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

namespace {

const std::regex& identifier_regex() {
  static const std::regex re("[A-Za-z_][A-Za-z0-9_]*");
  return re;
}

void render_term(std::string& out, const std::string& name, double coef,
                 bool first) {
  const bool negative = coef < 0;
  const double mag = std::abs(coef);
  if (first) {
    if (negative) out += "-";
  } else {
    out += negative ? " - " : " + ";
  }
  if (mag != 1.0) {
    out += format_number(mag);
    out += "*";
  }
  out += name;
}

}  // namespace

std::string render_expr(const LinExpr& expr) {
  std::string out;
  bool first = true;
  for (const auto& [name, coef] : expr.terms) {
    render_term(out, name, coef, first);
    first = false;
  }
  if (expr.constant != 0.0 || first) {
    if (first) {
      out += format_number(expr.constant);
    } else {
      out += expr.constant < 0 ? " - " : " + ";
      out += format_number(std::abs(expr.constant));
    }
  }
  return out;
}

std::string render_constraint(const Constraint& c) {
  return render_expr(c.lhs) + " " + std::string(to_string(c.sense)) + " " +
         format_number(c.rhs);
}

std::string render_model_document(const ModelIR& model) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["variables"] = ordered_json::array();
  for (const auto& v : model.variables) {
    ordered_json jv;
    jv["name"] = v.name;
    jv["kind"] = std::string(to_string(v.kind));
    if (std::isinf(v.lower)) {
      jv["lower"] = "-inf";
    } else {
      jv["lower"] = v.lower;
    }
    if (std::isinf(v.upper)) {
      jv["upper"] = "inf";
    } else {
      jv["upper"] = v.upper;
    }
    doc["variables"].push_back(std::move(jv));
  }
  doc["constraints"] = ordered_json::array();
  for (const auto& c : model.constraints) {
    ordered_json jc;
    jc["name"] = c.name;
    jc["expr"] = render_constraint(c);
    doc["constraints"].push_back(std::move(jc));
  }
  doc["objective"]["sense"] =
      model.objective.sense == ObjectiveSense::kMinimize ? "min" : "max";
  doc["objective"]["expr"] = render_expr(model.objective.expr);
  return doc.dump(2);
}

void validate(const ModelIR& model) {
  std::set<std::string> names;
  for (std::size_t i = 0; i < model.variables.size(); ++i) {
    const auto& v = model.variables[i];
    const std::string section = "variables[" + std::to_string(i) + "]";
    if (!std::regex_match(v.name, identifier_regex())) {
      throw Error(ErrorCode::kDocumentMalformed,
                  "invalid variable name '" + v.name + "'", section, v.name);
    }
    if (!names.insert(v.name).second) {
      throw Error(ErrorCode::kDuplicateName,
                  "duplicate variable name '" + v.name + "'", section, v.name);
    }
    if (std::isnan(v.lower) || std::isnan(v.upper) || v.lower > v.upper ||
        v.lower == kInfinity || v.upper == -kInfinity) {
      throw Error(ErrorCode::kDocumentMalformed,
                  "variable '" + v.name + "' has inconsistent bounds",
                  section, v.name);
    }
  }
  auto check_expr = [&](const LinExpr& e, const std::string& section) {
    for (const auto& [n, c] : e.terms) {
      if (names.count(n) == 0) {
        throw Error(ErrorCode::kUnknownVariable,
                    "unknown variable '" + n + "'", section, n);
      }
    }
  };
  std::set<std::string> cnames;
  for (std::size_t i = 0; i < model.constraints.size(); ++i) {
    const auto& c = model.constraints[i];
    const std::string section = "constraints[" + std::to_string(i) + "]";
    if (!cnames.insert(c.name).second) {
      throw Error(ErrorCode::kDuplicateName,
                  "duplicate constraint name '" + c.name + "'", section,
                  c.name);
    }
    check_expr(c.lhs, section);
  }
  check_expr(model.objective.expr, "objective");
}

// ---------------------------------------------------------------------------
// Exchange document

std::string extract_document(std::string_view text) {
  // Prefer the content of a fenced block when present.
  std::string_view body = text;
  if (auto fence = body.find("```"); fence != std::string_view::npos) {
    auto line_end = body.find('\n', fence);
    auto close = line_end == std::string_view::npos
                     ? std::string_view::npos
                     : body.find("```", line_end);
    if (close != std::string_view::npos) {
      body = body.substr(line_end + 1, close - line_end - 1);
    }
  }
  const auto open = body.find('{');
  if (open == std::string_view::npos) {
    auto b = body.find_first_not_of(" \t\r\n");
    auto e = body.find_last_not_of(" \t\r\n");
    return b == std::string_view::npos ? std::string()
                                       : std::string(body.substr(b, e - b + 1));
  }
  int depth = 0;
  bool in_string = false;
  bool escaped = false;
  for (std::size_t i = open; i < body.size(); ++i) {
    const char c = body[i];
    if (in_string) {
      if (escaped) {
        escaped = false;
      } else if (c == '\\') {
        escaped = true;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '{') {
      ++depth;
    } else if (c == '}') {
      if (--depth == 0) return std::string(body.substr(open, i - open + 1));
    }
  }
  return std::string(body.substr(open));
}

namespace {

double parse_bound(const nlohmann::json& j, double fallback,
                   const std::string& section) {
  if (j.is_null()) return fallback;
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (s == "inf" || s == "+inf" || s == "infinity" || s == "+infinity") {
      return kInfinity;
    }
    if (s == "-inf" || s == "-infinity") return -kInfinity;
  }
  throw Error(ErrorCode::kDocumentMalformed,
              "bound must be a number, \"inf\" or \"-inf\"", section);
}

[[noreturn]] void malformed(const std::string& message,
                            const std::string& section = {}) {
  throw Error(ErrorCode::kDocumentMalformed, message, section);
}

}  // namespace

ModelIR parse_model_document(std::string_view text, const ParameterMap* params) {
  const std::string body = extract_document(text);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    malformed(std::string("document is not valid JSON: ") + e.what(),
              "document");
  }
  if (!doc.is_object()) malformed("document must be a JSON object", "document");
  if (!doc.contains("variables") || !doc["variables"].is_array()) {
    malformed("missing \"variables\" array", "variables");
  }
  if (!doc.contains("objective") || !doc["objective"].is_object()) {
    malformed("missing \"objective\" object", "objective");
  }

  ModelIR model;
  std::set<std::string> names;
  const auto& jvars = doc["variables"];
  for (std::size_t i = 0; i < jvars.size(); ++i) {
    const auto& jv = jvars[i];
    const std::string section = "variables[" + std::to_string(i) + "]";
    if (!jv.is_object() || !jv.contains("name") || !jv["name"].is_string()) {
      malformed("variable entry needs a string \"name\"", section);
    }
    VariableDef v;
    v.name = jv["name"].get<std::string>();
    if (jv.contains("kind")) {
      if (!jv["kind"].is_string()) malformed("\"kind\" must be a string", section);
      const std::string kind = jv["kind"].get<std::string>();
      if (kind == "integer" || kind == "int" || kind == "Integer") {
        v.kind = VarKind::kInteger;
      } else if (kind == "continuous" || kind == "Continuous") {
        v.kind = VarKind::kContinuous;
      } else {
        malformed("unknown variable kind '" + kind + "'", section);
      }
    }
    v.lower = parse_bound(jv.value("lower", nlohmann::json()), 0.0, section);
    v.upper = parse_bound(jv.value("upper", nlohmann::json()), kInfinity,
                          section);
    names.insert(v.name);
    model.variables.push_back(std::move(v));
  }

  // Name/bound checks before expressions so duplicate declarations surface
  // as DuplicateName rather than as a later parse error.
  {
    ModelIR vars_only;
    vars_only.variables = model.variables;
    validate(vars_only);
  }

  if (doc.contains("constraints")) {
    const auto& jcons = doc["constraints"];
    if (!jcons.is_array()) malformed("\"constraints\" must be an array", "constraints");
    for (std::size_t i = 0; i < jcons.size(); ++i) {
      const auto& jc = jcons[i];
      const std::string section = "constraints[" + std::to_string(i) + "]";
      std::string expr;
      std::string name;
      if (jc.is_string()) {
        expr = jc.get<std::string>();
      } else if (jc.is_object() && jc.contains("expr") && jc["expr"].is_string()) {
        expr = jc["expr"].get<std::string>();
        if (jc.contains("name") && jc["name"].is_string()) {
          name = jc["name"].get<std::string>();
        }
      } else {
        malformed("constraint entry needs a string \"expr\"", section);
      }
      if (name.empty()) name = "c" + std::to_string(i + 1);
      try {
        model.constraints.push_back(
            parse_constraint(expr, names, params, std::move(name)));
      } catch (const Error& e) {
        throw Error(e.code(), std::string(e.what()) + " in `" + expr + "`",
                    section, e.subject(), e.position());
      }
    }
  }

  const auto& jobj = doc["objective"];
  std::string sense = jobj.value("sense", std::string("min"));
  std::transform(sense.begin(), sense.end(), sense.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (sense == "min" || sense == "minimize") {
    model.objective.sense = ObjectiveSense::kMinimize;
  } else if (sense == "max" || sense == "maximize") {
    model.objective.sense = ObjectiveSense::kMaximize;
  } else {
    malformed("objective sense must be \"min\" or \"max\"", "objective");
  }
  if (!jobj.contains("expr") || !jobj["expr"].is_string()) {
    malformed("objective needs a string \"expr\"", "objective");
  }
  const std::string obj_text = jobj["expr"].get<std::string>();
  try {
    model.objective.expr = parse_linear_expr(obj_text, names, params);
  } catch (const Error& e) {
    throw Error(e.code(), std::string(e.what()) + " in `" + obj_text + "`",
                "objective", e.subject(), e.position());
  }

  validate(model);
  return model;
}

}  // namespace ormind
