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

#include "ormind/trace.hpp"

#include <optional>
#include <set>

#include <fmt/format.h>

#include "ormind/errors.hpp"
#include "ormind/model_ir.hpp"
#include "ormind/pipeline.hpp"

namespace ormind {

namespace {

using ojson = nlohmann::ordered_json;

constexpr std::size_t kExcerpt = 600;

[[noreturn]] void malformed(const std::string& why) {
  throw Error(ErrorCode::kFormatError, "malformed trace: " + why, "trace");
}

std::string excerpt(std::string s) {
  if (s.size() > kExcerpt) s = s.substr(0, kExcerpt) + "\n  [... " +
                              std::to_string(s.size() - kExcerpt) + " more characters]";
  return s;
}

std::string indent(const std::string& s) {
  std::string out = "  ";
  for (char c : s) {
    out += c;
    if (c == '\n') out += "  ";
  }
  return out;
}

std::string title(const std::string& stage_label) {
  if (stage_label == stage::kSemanticEncoder) return "Semantic Encoder";
  if (stage_label == stage::kFormalization) return "Formalization Thinking";
  if (stage_label == stage::kExecutiveCompiler) return "Executive Compiler";
  if (stage_label == stage::kSupervisorForward) return "Metacognitive Supervisor (forward)";
  if (stage_label == stage::kSupervisorBackward) return "Metacognitive Supervisor (backward)";
  if (stage_label == stage::kExecute) return "Execute";
  if (stage_label == stage::kReasonerError) return "System 2 Reasoner (error diagnosis)";
  return "System 2 Reasoner (counterfactual)";
}

std::string text_of(const ojson& v) { return v.is_string() ? v.get<std::string>() : v.dump(2); }

void feedback_lines(std::string& out, const ojson& fb) {
  if (!fb.is_object()) return;
  if (fb.contains("cause") && fb["cause"].is_string() && !fb["cause"].get<std::string>().empty()) {
    out += "  cause: " + fb["cause"].get<std::string>() + "\n";
  }
  if (fb.contains("lines") && fb["lines"].is_array()) {
    for (const auto& l : fb["lines"]) out += "  " + text_of(l) + "\n";
  }
}

void result_lines(std::string& out, const ojson& r) {
  out += "  status: " + r.value("status", std::string("?")) + "\n";
  if (r.contains("objective") && !r["objective"].is_null()) {
    out += "  objective: " + text_of(r["objective"]) + "\n";
  }
  if (r.contains("assignment") && r["assignment"].is_object()) {
    std::string vals;
    for (const auto& [k, v] : r["assignment"].items()) {
      if (!vals.empty()) vals += ", ";
      vals += k + " = " + text_of(v);
    }
    out += "  assignment: " + vals + "\n";
  }
  if (r.contains("message") && r["message"].is_string() &&
      !r["message"].get<std::string>().empty()) {
    out += "  message: " + r["message"].get<std::string>() + "\n";
  }
  if (r.contains("stats") && r["stats"].is_object()) {
    out += fmt::format("  solver: {} pivots, {} nodes\n", r["stats"].value("pivots", 0),
                       r["stats"].value("nodes", 0));
  }
}

// Model documents read better as one line per item than as raw JSON.
std::optional<std::string> summarize_document(const std::string& text) {
  nlohmann::json d;
  try {
    d = nlohmann::json::parse(extract_document(text));
  } catch (const nlohmann::json::exception&) {
    return std::nullopt;
  }
  if (!d.is_object() || !d.contains("constraints") || !d["constraints"].is_array()) {
    return std::nullopt;
  }
  std::string out;
  if (d.contains("variables") && d["variables"].is_array()) {
    out += "  variables:";
    for (const auto& v : d["variables"]) {
      out += " " + (v.is_object() ? v.value("name", std::string("?")) + " (" +
                                        v.value("kind", std::string("continuous")) + ")"
                                  : text_of(v));
    }
    out += "\n";
  }
  for (const auto& c : d["constraints"]) {
    if (c.is_object()) {
      out += "  " + c.value("name", std::string("-")) + ": " + text_of(c.value("expr", nlohmann::json())) + "\n";
    } else {
      out += "  " + text_of(c) + "\n";
    }
  }
  if (d.contains("objective") && d["objective"].is_object()) {
    out += "  objective: " + d["objective"].value("sense", std::string("?")) + " " +
           text_of(d["objective"].value("expr", nlohmann::json())) + "\n";
  }
  return out;
}

}  // namespace

nlohmann::ordered_json parse_trace(const std::string& text) {
  ojson doc;
  try {
    doc = ojson::parse(text);
  } catch (const nlohmann::json::exception& e) {
    malformed(e.what());
  }
  if (!doc.is_object()) malformed("top level must be an object");
  if (!doc.contains("events") || !doc["events"].is_array()) malformed("missing \"events\" array");
  if (!doc.contains("classification") || !doc["classification"].is_string() ||
      !classification_from_string(doc["classification"].get<std::string>())) {
    malformed("missing or unknown \"classification\"");
  }
  static const std::set<std::string> known = {
      stage::kSemanticEncoder,   stage::kFormalization,      stage::kExecutiveCompiler,
      stage::kSupervisorForward, stage::kSupervisorBackward, stage::kExecute,
      stage::kReasonerError,     stage::kReasonerCounterfactual};
  for (const auto& e : doc["events"]) {
    if (!e.is_object() || !e.contains("stage") || !e["stage"].is_string() ||
        !known.count(e["stage"].get<std::string>())) {
      malformed("event without a known \"stage\"");
    }
  }
  return doc;
}

std::string render_narrative(const nlohmann::ordered_json& trace) {
  std::string out = fmt::format("Problem {}\n", trace.value("problem_id", std::string("?")));
  for (const auto& e : trace["events"]) {
    const std::string label = e["stage"].get<std::string>();
    std::string head = title(label);
    if (e.contains("calls") && e["calls"].is_array() && !e["calls"].empty()) {
      std::string slots;
      for (const auto& c : e["calls"]) {
        if (!slots.empty()) slots += ", ";
        slots += c.value("key", std::string("?"));
      }
      head += " [" + slots + "]";
    }
    out += fmt::format("\n== {} ==\n", head);

    if (e.contains("error")) {
      out += "  error: " + e["error"].value("message", std::string()) + "\n";
    }
    if (label == stage::kExecute) {
      out += "  source: " + e.value("source", std::string("?")) + "\n";
      if (e.contains("result")) result_lines(out, e["result"]);
    } else if (label == stage::kReasonerError) {
      feedback_lines(out, e.value("feedback", ojson()));
    } else if (label == stage::kReasonerCounterfactual) {
      if (e.contains("skipped")) out += "  skipped: " + text_of(e["skipped"]) + "\n";
      if (e.value("revision_rejected", false)) {
        out += "  revision rejected; previous solution kept\n";
      }
      if (e.contains("feedback") && !e["feedback"].is_null()) {
        feedback_lines(out, e["feedback"]);
      } else if (!e.contains("skipped")) {
        out += "  no modifications needed\n";
      }
    } else {
      if (label == stage::kSupervisorBackward && e.contains("feedback")) {
        out += "  feedback received:\n";
        feedback_lines(out, e["feedback"]);
      }
      if (e.contains("output")) {
        const std::string text = text_of(e["output"]);
        const auto doc = label == stage::kExecutiveCompiler || label == stage::kSupervisorForward ||
                                 label == stage::kSupervisorBackward
                             ? summarize_document(text)
                             : std::nullopt;
        out += doc ? *doc : indent(excerpt(text)) + "\n";
      }
    }
  }

  out += "\n== Outcome ==\n";
  if (trace.contains("repairs") && trace["repairs"].is_object()) {
    out += fmt::format("  repairs: {} syntax, {} counterfactual\n",
                       trace["repairs"].value("syntax", 0),
                       trace["repairs"].value("counterfactual", 0));
  }
  if (trace.contains("abort") && trace["abort"].is_object()) {
    out += "  aborted in " + trace["abort"].value("stage", std::string("?")) + ": " +
           trace["abort"].value("message", std::string()) + "\n";
  }
  if (trace.contains("instances") && trace["instances"].is_array()) {
    for (const auto& inst : trace["instances"]) {
      out += fmt::format("  instance {}: {} (expected {})\n", inst.value("index", 0),
                         inst.value("classification", std::string("?")),
                         inst.contains("expected") ? inst["expected"].dump() : "[]");
    }
  }
  out += "  classification: " + trace["classification"].get<std::string>() + "\n";
  return out;
}

}  // namespace ormind
