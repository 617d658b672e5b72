#!/usr/bin/env python3
"""Regenerates data/corpus: 12 problems plus replay fixtures.

Expected values come from scipy's MILP solver on hand-written matrices, so
they are independent of the C++ solver under test.
"""
import json
import pathlib

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp

ROOT = pathlib.Path(__file__).resolve().parents[2] / "data" / "corpus"
INF = np.inf


def solve(c, A, lo, hi, lb, ub, integer, maximize):
    c = np.asarray(c, dtype=float)
    res = milp(
        -c if maximize else c,
        constraints=[LinearConstraint(np.asarray(A, float), lo, hi)] if len(A) else [],
        bounds=Bounds(lb, ub),
        integrality=np.asarray(integer, int),
    )
    if res.status == 2:
        return "Infeasible"
    assert res.status == 0, res.message
    v = -res.fun if maximize else res.fun
    return round(float(v), 4)


def doc(variables, constraints, sense, objective):
    return {
        "variables": [
            {"name": n, "kind": k, "lower": lo, "upper": "inf" if up is None else up}
            for n, k, lo, up in variables
        ],
        "constraints": [{"name": n, "expr": e} for n, e in constraints],
        "objective": {"sense": sense, "expr": objective},
    }


def fenced(d, preface="Here is the model."):
    return preface + "\n```json\n" + json.dumps(d, indent=2) + "\n```\n"


def theta(entries):
    return json.dumps(
        {k: {"Type": t, "Definition": d} for k, (t, d) in entries.items()}, indent=2
    )


def draft(variables, constraints, objective):
    return json.dumps(
        {"VARIABLES": variables, "CONSTRAINTS": constraints, "OBJECTIVE": objective}, indent=2
    )


PROBLEMS = []
FIXTURES = {}


def add(pid, problem, fixtures):
    problem = {"id": pid, **problem}
    PROBLEMS.append(problem)
    FIXTURES[pid] = fixtures


def forward_fixtures(se, form, model, compiled=None):
    return {
        "SemanticEncoder/0": se,
        "Formalization/0": form,
        "ExecutiveCompiler/0": fenced(compiled or model, "Candidate model document:"),
        "SupervisorForward/0": fenced(model, "Checked the candidate; final document below."),
    }


# --- pharmacy: forward model misses the 70% share; one counterfactual repair.
pharmacy_vars = [
    ("painkillers", "integer", 50, None),
    ("sleeping_pills", "integer", 0, None),
]
pharmacy_good = doc(
    pharmacy_vars,
    [
        ("min_painkillers", "painkillers >= 50"),
        ("morphine", "10*painkillers + 6*sleeping_pills <= 3000"),
        ("sleeping_share", "sleeping_pills >= 0.7*(painkillers + sleeping_pills)"),
    ],
    "min",
    "3*painkillers + 5*sleeping_pills",
)
pharmacy_bad = doc(
    pharmacy_vars,
    [
        ("min_painkillers", "painkillers >= 50"),
        ("morphine", "10*painkillers + 6*sleeping_pills <= 3000"),
        ("share", "3*painkillers + 5*sleeping_pills >= 0.7*(painkillers + sleeping_pills)"),
    ],
    "min",
    "3*painkillers + 5*sleeping_pills",
)
fx = forward_fixtures(
    theta(
        {
            "painkillers": ("integer", "number of painkiller pills produced"),
            "sleeping_pills": ("integer", "number of sleeping pills produced"),
        }
    ),
    draft(
        "painkillers: integer, sleeping_pills: integer",
        "painkillers >= 50, sleeping_pills >= 0.7 * (painkillers + sleeping_pills), "
        "10*painkillers + 6*sleeping_pills <= 3000",
        "Minimize 3*painkillers + 5*sleeping_pills",
    ),
    pharmacy_bad,
)
fx["SupervisorBackward/0"] = fenced(pharmacy_good, "Added the missing share requirement.")
add(
    "pharmacy",
    {
        "description": (
            "A drug store holds 3000 mg of morphine for two products. One painkiller pill uses "
            "10 mg of morphine and 3 units of a digestive additive; one sleeping pill uses 6 mg "
            "of morphine and 5 units of the additive. At least 50 painkiller pills must be "
            "made, and because sleeping pills sell better, no less than 70% of all pills made "
            "must be sleeping pills. Choose the number of each pill to minimize the additive used."
        ),
        "instances": [
            {
                "input": {},
                "output": [
                    solve([3, 5], [[10, 6], [-0.7, 0.3]], [-INF, 0], [3000, INF], [50, 0],
                          [INF, INF], [1, 1], False)
                ],
            }
        ],
    },
    fx,
)

# --- fishery: parameters bound from the instance input.
fishery_in = {"DogCapability": 100, "TruckCapability": 300, "DogCost": 50, "TruckCost": 100,
              "MaxBudget": 1000}
fishery_model = doc(
    [("dog_trips", "integer", 0, None), ("truck_trips", "integer", 0, None)],
    [
        ("budget", "DogCost*dog_trips + TruckCost*truck_trips <= MaxBudget"),
        ("fewer_dog_trips", "dog_trips <= truck_trips - 1"),
    ],
    "max",
    "DogCapability*dog_trips + TruckCapability*truck_trips",
)
add(
    "fishery",
    {
        "description": (
            "A fishing company moves its catch by sled dog trips or truck trips. Each mode "
            "carries a different amount of fish per trip (DogCapability, TruckCapability) and "
            "costs a different amount per trip (DogCost, TruckCost). Spending may not exceed "
            "MaxBudget, and there must be strictly fewer sled dog trips than truck trips. "
            "Maximize the fish transported."
        ),
        "instances": [
            {
                "input": fishery_in,
                "output": [
                    solve([100, 300], [[50, 100], [1, -1]], [-INF, -INF], [1000, -1], [0, 0],
                          [INF, INF], [1, 1], True)
                ],
            }
        ],
    },
    forward_fixtures(
        theta(
            {
                "dog_trips": ("integer", "number of sled dog trips"),
                "truck_trips": ("integer", "number of truck trips"),
            }
        ),
        draft(
            "dog_trips: integer, truck_trips: integer",
            "DogCost*dog_trips + TruckCost*truck_trips <= MaxBudget, dog_trips < truck_trips",
            "Maximize DogCapability*dog_trips + TruckCapability*truck_trips",
        ),
        fishery_model,
    ),
)

# --- aircraft: infeasible by ground truth.
aircraft_in = {
    "TotalAircraft": 5,
    "TotalRoutes": 5,
    "Availability": [10, 19, 25, 15, 0],
    "Demand": [250, 120, 180, 90, 600],
    "Capacity": [[16, 15, 28, 23, 81], [0, 10, 14, 15, 57], [0, 5, 0, 7, 29],
                 [9, 11, 22, 17, 55], [1, 1, 1, 1, 1]],
    "Costs": [[17, 5, 18, 17, 7], [15, 20, 9, 5, 18], [15, 13, 8, 5, 19],
              [13, 14, 6, 16, 8], [13, 14, 14, 10, 7]],
}
n = 5
aircraft_model = doc(
    [(f"x_{i}_{j}", "integer", 0, None) for i in range(n) for j in range(n)],
    [(f"availability_{i}", " + ".join(f"x_{i}_{j}" for j in range(n)) + f" <= Availability[{i}]")
     for i in range(n)]
    + [(f"demand_{j}", " + ".join(f"Capacity[{i}][{j}]*x_{i}_{j}" for i in range(n))
        + f" >= Demand[{j}]") for j in range(n)],
    "min",
    " + ".join(f"Costs[{i}][{j}]*x_{i}_{j}" for i in range(n) for j in range(n)),
)
A, lo, hi = [], [], []
for i in range(n):
    A.append([1 if k // n == i else 0 for k in range(n * n)]); lo.append(-INF)
    hi.append(aircraft_in["Availability"][i])
for j in range(n):
    A.append([aircraft_in["Capacity"][k // n][j] if k % n == j else 0 for k in range(n * n)])
    lo.append(aircraft_in["Demand"][j]); hi.append(INF)
cost = [aircraft_in["Costs"][k // n][k % n] for k in range(n * n)]
add(
    "aircraft",
    {
        "description": (
            "Assign TotalAircraft aircraft to TotalRoutes routes at minimum cost. Aircraft i can "
            "fly at most Availability_i routes, route j needs Demand_j units of service, "
            "Capacity_{i,j} is the service one aircraft i provides on route j, and Cost_{i,j} "
            "is the cost of that assignment."
        ),
        "parameters": [
            {"symbol": "TotalAircraft", "definition": "number of aircraft", "shape": []},
            {"symbol": "TotalRoutes", "definition": "number of routes", "shape": []},
            {"symbol": "Availability", "definition": "route limit per aircraft",
             "shape": ["TotalAircraft"]},
            {"symbol": "Demand", "definition": "service needed per route",
             "shape": ["TotalRoutes"]},
            {"symbol": "Capacity", "definition": "service per aircraft and route",
             "shape": ["TotalAircraft", "TotalRoutes"]},
            {"symbol": "Costs", "definition": "assignment cost per aircraft and route",
             "shape": ["TotalAircraft", "TotalRoutes"]},
        ],
        "instances": [
            {"input": aircraft_in,
             "output": [solve(cost, A, lo, hi, [0] * 25, [INF] * 25, [1] * 25, False)]}
        ],
    },
    forward_fixtures(
        theta(
            {
                "Availability": ("vector", "routes each aircraft can serve"),
                "Demand": ("vector", "service needed per route"),
                "Capacity": ("matrix", "service per aircraft and route"),
                "Costs": ("matrix", "cost per aircraft and route"),
                "x": ("integer matrix", "aircraft i assigned to route j"),
            }
        ),
        draft(
            "x[i][j]: integer, number of times aircraft i serves route j",
            "Sum(j) x[i][j] <= Availability[i] for every aircraft i; "
            "Sum(i) Capacity[i][j] * x[i][j] >= Demand[j] for every route j",
            "Minimize Sum(i, j) Costs[i][j] * x[i][j]",
        ),
        aircraft_model,
    ),
)

# --- steel: forward model divides by the production rate; one syntax repair.
steel_in = {"ProductNum": 3, "ProductionRate": [200, 140, 160], "Profit": [25, 30, 29],
            "MinSales": [1000, 500, 750], "MaxSales": [6000, 4000, 3500], "HoursAvailable": 40}
steel_vars = [(f"tons_{p}", "continuous", 0, None) for p in range(3)]
steel_bounds = [(f"min_sales_{p}", f"tons_{p} >= MinSales[{p}]") for p in range(3)] + [
    (f"max_sales_{p}", f"tons_{p} <= MaxSales[{p}]") for p in range(3)]
steel_obj = " + ".join(f"Profit[{p}]*tons_{p}" for p in range(3))
steel_bad = doc(
    steel_vars,
    [("hours", " + ".join(f"tons_{p} / ProductionRate[{p}]" for p in range(3))
      + " <= HoursAvailable")] + steel_bounds,
    "max", steel_obj)
steel_good = doc(
    steel_vars,
    [("hours", "0.005*tons_0 + 0.0071428571*tons_1 + 0.00625*tons_2 <= HoursAvailable")]
    + steel_bounds,
    "max", steel_obj)
fx = forward_fixtures(
    theta(
        {
            "ProductionRate": ("vector", "tons of each product made per hour"),
            "Profit": ("vector", "profit per ton of each product"),
            "MinSales": ("vector", "minimum tons to sell of each product"),
            "MaxSales": ("vector", "maximum tons that can be sold of each product"),
            "HoursAvailable": ("scalar", "production hours available this week"),
        }
    ),
    draft(
        "tons[p]: continuous, tons of product p made, for p=1 to ProductNum",
        "Sum(p=1 to ProductNum) tons[p] / ProductionRate[p] <= HoursAvailable; "
        "MinSales[p] <= tons[p] <= MaxSales[p] for each p",
        "Maximize Sum(p=1 to ProductNum) Profit[p] * tons[p]",
    ),
    steel_bad,
)
fx["SupervisorBackward/0"] = fenced(
    steel_good, "Division is not available, so the hours constraint uses reciprocal rates.")
rates = steel_in["ProductionRate"]
add(
    "steel",
    {
        "description": (
            "A mill makes ProductNum steel products. Product p is made at ProductionRate_p "
            "tons per hour and earns Profit_p per ton. At least MinSales_p and at most "
            "MaxSales_p tons of product p can be sold, and HoursAvailable production hours "
            "are left this week. Decide the tons of each product to maximize profit."
        ),
        "parameters": [
            {"symbol": "ProductNum", "definition": "number of products", "shape": []},
            {"symbol": "ProductionRate", "definition": "tons per hour", "shape": ["ProductNum"]},
            {"symbol": "Profit", "definition": "profit per ton", "shape": ["ProductNum"]},
            {"symbol": "MinSales", "definition": "sales floor", "shape": ["ProductNum"]},
            {"symbol": "MaxSales", "definition": "sales cap", "shape": ["ProductNum"]},
            {"symbol": "HoursAvailable", "definition": "hours left", "shape": []},
        ],
        "instances": [
            {
                "input": steel_in,
                "output": [
                    solve(steel_in["Profit"], [[1 / r for r in rates]], [-INF], [40],
                          steel_in["MinSales"], steel_in["MaxSales"], [0, 0, 0], True)
                ],
            }
        ],
    },
    fx,
)

# --- furniture: plain integer program with named inputs.
furniture_in = {"DeskProfit": 40, "ShelfProfit": 30, "WoodPerDesk": 4, "WoodPerShelf": 3,
                "LaborPerDesk": 2, "LaborPerShelf": 3, "WoodAvailable": 121,
                "LaborAvailable": 95}
furniture_model = doc(
    [("desks", "integer", 0, None), ("shelves", "integer", 0, None)],
    [
        ("wood", "WoodPerDesk*desks + WoodPerShelf*shelves <= WoodAvailable"),
        ("labor", "LaborPerDesk*desks + LaborPerShelf*shelves <= LaborAvailable"),
    ],
    "max",
    "DeskProfit*desks + ShelfProfit*shelves",
)
add(
    "furniture",
    {
        "description": (
            "A workshop builds desks and bookshelves. A desk earns DeskProfit and needs "
            "WoodPerDesk units of wood and LaborPerDesk hours; a bookshelf earns ShelfProfit "
            "and needs WoodPerShelf wood and LaborPerShelf hours. WoodAvailable wood and "
            "LaborAvailable hours are on hand. Only whole items can be sold. Maximize profit."
        ),
        "instances": [
            {
                "input": furniture_in,
                "output": [solve([40, 30], [[4, 3], [2, 3]], [-INF, -INF], [121, 95], [0, 0],
                                 [INF, INF], [1, 1], True)],
            }
        ],
    },
    forward_fixtures(
        theta(
            {
                "desks": ("integer", "desks built"),
                "shelves": ("integer", "bookshelves built"),
            }
        ),
        draft(
            "desks: integer, shelves: integer",
            "WoodPerDesk*desks + WoodPerShelf*shelves <= WoodAvailable\n"
            "LaborPerDesk*desks + LaborPerShelf*shelves <= LaborAvailable",
            "Maximize DeskProfit*desks + ShelfProfit*shelves",
        ),
        furniture_model,
    ),
)

# --- diet: two instances; success needs both.
diet_model = doc(
    [("oats", "integer", 0, None), ("lentils", "integer", 0, None)],
    [
        ("protein", "ProteinPerOats*oats + ProteinPerLentils*lentils >= ProteinNeed"),
        ("energy", "CaloriesPerOats*oats + CaloriesPerLentils*lentils >= CalorieNeed"),
    ],
    "min",
    "CostOats*oats + CostLentils*lentils",
)
diet_instances = []
for need_p, need_c in [(60, 1500), (80, 1200)]:
    inp = {"CostOats": 2, "CostLentils": 3.5, "ProteinPerOats": 4, "ProteinPerLentils": 10,
           "CaloriesPerOats": 200, "CaloriesPerLentils": 150, "ProteinNeed": need_p,
           "CalorieNeed": need_c}
    diet_instances.append({
        "input": inp,
        "output": [solve([2, 3.5], [[4, 10], [200, 150]], [need_p, need_c], [INF, INF], [0, 0],
                         [INF, INF], [1, 1], False)],
    })
add(
    "diet",
    {
        "description": (
            "A cook plans servings of oats and lentils. A serving of oats costs CostOats and "
            "gives ProteinPerOats grams of protein and CaloriesPerOats calories; a serving of "
            "lentils costs CostLentils and gives ProteinPerLentils grams and CaloriesPerLentils "
            "calories. The plan must reach ProteinNeed grams of protein and CalorieNeed "
            "calories using whole servings. Minimize cost."
        ),
        "instances": diet_instances,
    },
    forward_fixtures(
        theta({"oats": ("integer", "servings of oats"),
               "lentils": ("integer", "servings of lentils")}),
        draft(
            "oats: integer, lentils: integer",
            "ProteinPerOats*oats + ProteinPerLentils*lentils >= ProteinNeed, "
            "CaloriesPerOats*oats + CaloriesPerLentils*lentils >= CalorieNeed",
            "Minimize CostOats*oats + CostLentils*lentils",
        ),
        diet_model,
    ),
)

# --- transport: equality constraints on warehouse shipments.
transport_in = {"Supply": [50, 70], "Demand": [30, 40, 45],
                "Cost": [[4, 6, 9], [5, 3, 7]]}
tv = [f"ship_{i}_{j}" for i in range(2) for j in range(3)]
transport_model = doc(
    [(v, "continuous", 0, None) for v in tv],
    [(f"ship_all_{i}", " + ".join(f"ship_{i}_{j}" for j in range(3)) + f" = Supply[{i}]")
     for i in range(2)]
    + [(f"meet_{j}", " + ".join(f"ship_{i}_{j}" for i in range(2)) + f" >= Demand[{j}]")
       for j in range(3)],
    "min",
    " + ".join(f"Cost[{i}][{j}]*ship_{i}_{j}" for i in range(2) for j in range(3)),
)
A = [[1 if k // 3 == i else 0 for k in range(6)] for i in range(2)] + [
    [1 if k % 3 == j else 0 for k in range(6)] for j in range(3)]
add(
    "transport",
    {
        "description": (
            "Two warehouses must ship out their whole stock, Supply_i units each, to three "
            "stores that need at least Demand_j units. Shipping one unit from warehouse i to "
            "store j costs Cost_{i,j}. Minimize total shipping cost."
        ),
        "parameters": [
            {"symbol": "Supply", "definition": "stock per warehouse", "shape": [2]},
            {"symbol": "Demand", "definition": "units needed per store", "shape": [3]},
            {"symbol": "Cost", "definition": "unit shipping cost", "shape": [2, 3]},
        ],
        "instances": [
            {
                "input": transport_in,
                "output": [solve([4, 6, 9, 5, 3, 7], A, [50, 70, 30, 40, 45],
                                 [50, 70, INF, INF, INF], [0] * 6, [INF] * 6, [0] * 6, False)],
            }
        ],
    },
    forward_fixtures(
        theta({"Supply": ("vector", "stock per warehouse"),
               "Demand": ("vector", "need per store"),
               "Cost": ("matrix", "unit cost per route")}),
        draft(
            "ship[i][j]: continuous, units sent from warehouse i to store j",
            "Sum(j) ship[i][j] = Supply[i] for each warehouse; "
            "Sum(i) ship[i][j] >= Demand[j] for each store",
            "Minimize Sum(i, j) Cost[i][j] * ship[i][j]",
        ),
        transport_model,
    ),
)

# --- bakery: forward model uses an undeclared name; one syntax repair.
bakery_vars = [("loaves", "integer", 0, None), ("muffins", "integer", 0, None)]
bakery_bad = doc(
    bakery_vars,
    [("oven", "20*loaves + 8*muffin <= 480"), ("flour", "0.5*loaves + 0.1*muffins <= 10")],
    "max", "3*loaves + 1.5*muffins")
bakery_good = doc(
    bakery_vars,
    [("oven", "20*loaves + 8*muffins <= 480"), ("flour", "0.5*loaves + 0.1*muffins <= 10")],
    "max", "3*loaves + 1.5*muffins")
fx = forward_fixtures(
    theta({"loaves": ("integer", "bread loaves baked"),
           "muffins": ("integer", "muffins baked")}),
    draft("loaves: integer, muffins: integer",
          "20*loaves + 8*muffins <= 480, 0.5*loaves + 0.1*muffins <= 10",
          "Maximize 3*loaves + 1.5*muffins"),
    bakery_bad,
)
fx["SupervisorBackward/0"] = fenced(bakery_good, "Fixed the variable name in the oven constraint.")
add(
    "bakery",
    {
        "description": (
            "A bakery sells bread loaves for a profit of 3 and muffins for 1.5. A loaf takes "
            "20 oven minutes and 0.5 kg of flour, a muffin 8 oven minutes and 0.1 kg. The oven "
            "runs 480 minutes a day and 10 kg of flour are in stock. Maximize daily profit."
        ),
        "instances": [
            {"input": {},
             "output": [solve([3, 1.5], [[20, 8], [0.5, 0.1]], [-INF, -INF], [480, 10], [0, 0],
                              [INF, INF], [1, 1], True)]}
        ],
    },
    fx,
)

# --- fault_encoder: the encoder never returns JSON.
add(
    "fault_encoder",
    {
        "description": (
            "A printer makes posters and flyers. A poster earns 2 and a flyer 1. The press "
            "runs 100 minutes; a poster takes 4 minutes and a flyer 1. Maximize earnings."
        ),
        "instances": [{"input": {}, "output": [200]}],
    },
    {
        "SemanticEncoder/0": "The parameters are the posters and the flyers.",
        "SemanticEncoder/1": "Posters (integer) and flyers (integer).",
    },
)

# --- fault_document: neither supervisor document parses.
fd_model = doc([("x", "continuous", 0, None), ("y", "continuous", 0, None)],
               [("mix", "x * y <= 50")], "max", "x + y")
fd_backward = doc([("x", "continuous", 0, None), ("y", "continuous", 0, None)],
                  [("mix", "x + y < 50")], "max", "x + y")
fx = forward_fixtures(
    theta({"x": ("continuous", "litres of solution A"),
           "y": ("continuous", "litres of solution B")}),
    draft("x: continuous, y: continuous", "x + y <= 50", "Maximize x + y"),
    fd_model,
)
fx["SupervisorBackward/0"] = fenced(fd_backward, "Rewrote the mixing constraint.")
add(
    "fault_document",
    {
        "description": (
            "A lab blends solutions A and B. At most 50 litres fit in the tank. Maximize the "
            "litres blended."
        ),
        "instances": [{"input": {}, "output": [50]}],
    },
    fx,
)

# --- fault_unbounded: both documents drop the budget, leaving the model unbounded.
fu_model = doc([("ads", "integer", 0, None), ("banners", "integer", 0, None)],
               [("balance", "ads - banners <= 10")], "max", "2*ads + 3*banners")
fx = forward_fixtures(
    theta({"ads": ("integer", "radio ads"), "banners": ("integer", "web banners")}),
    draft("ads: integer, banners: integer",
          "ads - banners <= 10",
          "Maximize 2*ads + 3*banners"),
    fu_model,
)
fx["SupervisorBackward/0"] = fenced(fu_model, "The model matches the description.")
add(
    "fault_unbounded",
    {
        "description": (
            "A shop buys radio ads at 100 each and web banners at 200 each with a budget of "
            "3000. An ad reaches 2 thousand people and a banner 3 thousand. Ads may exceed "
            "banners by at most 10. Maximize reach."
        ),
        "instances": [
            {"input": {},
             "output": [solve([2, 3], [[100, 200], [1, -1]], [-INF, -INF], [3000, 10], [0, 0],
                              [INF, INF], [1, 1], True)]}
        ],
    },
    fx,
)

# --- fault_wrong: the model omits the tomato acreage cap, so the optimum is wrong.
fw_model = doc([("tomatoes", "continuous", 0, None), ("peppers", "continuous", 0, None)],
               [("land", "tomatoes + peppers <= 100"),
                ("labor", "5*tomatoes + 2*peppers <= 350")],
               "max", "300*tomatoes + 200*peppers")
add(
    "fault_wrong",
    {
        "description": (
            "A farmer has 100 acres for tomatoes and peppers. An acre of tomatoes earns 300 and "
            "needs 5 hours of labor; an acre of peppers earns 200 and needs 2 hours. There are "
            "350 labor hours, and at most 40 acres may be tomatoes. Maximize earnings."
        ),
        "instances": [
            {"input": {},
             "output": [solve([300, 200], [[1, 1], [5, 2]], [-INF, -INF], [100, 350], [0, 0],
                              [40, INF], [0, 0], True)]}
        ],
    },
    forward_fixtures(
        theta({"tomatoes": ("continuous", "acres of tomatoes"),
               "peppers": ("continuous", "acres of peppers")}),
        draft("tomatoes: continuous, peppers: continuous",
              "tomatoes + peppers <= 100, 5*tomatoes + 2*peppers <= 350",
              "Maximize 300*tomatoes + 200*peppers"),
        fw_model,
    ),
)


def main():
    (ROOT / "fixtures").mkdir(parents=True, exist_ok=True)
    for p in PROBLEMS:
        (ROOT / f"{p['id']}.json").write_text(json.dumps(p, indent=2) + "\n")
        store = {slot: {"content": text} for slot, text in sorted(FIXTURES[p["id"]].items())}
        (ROOT / "fixtures" / f"{p['id']}.json").write_text(json.dumps(store, indent=2) + "\n")
    for p in PROBLEMS:
        print(p["id"], [i["output"] for i in p["instances"]])


if __name__ == "__main__":
    main()
