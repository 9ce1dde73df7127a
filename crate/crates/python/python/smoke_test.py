"""Smoke test for the pyklmteam extension module.

Build and run from the repository root:

    cargo build --release -p klmteam-py --features extension-module
    cp target/release/libpyklmteam.so crates/python/python/pyklmteam.so
    python3 crates/python/python/smoke_test.py
"""

import json

import pyklmteam as kt

X = ("p,q,r", "100;010")

assert kt.eval_team(*X, "dep(p;q)")
assert kt.eval_team(*X, "dep(r)")
assert kt.eval_team(*X, "dep(p) | dep(p)")
assert not kt.eval_team(*X, "dep(p)")
assert kt.oracle_eval(*X, "dep(p) | dep(p)")

team = kt.Team(*X)
assert len(team) == 2 and team.members() == ["010", "100"]
assert team.satisfies("~r & (p | q)", engine="flat")

f = kt.Formula("p & (q | dep(r))")
assert f.vars() == ["p", "q", "r"] and not f.is_pl()
assert kt.Formula(f.render()) == f

try:
    kt.Formula("dep(p")
except ValueError as e:
    assert "offset" in str(e)
else:
    raise AssertionError("parse error not raised")

assert kt.semantic_entails("p,q", "p & q", "p", logic="tpl")
assert not kt.semantic_entails("p,q", "p | q", "p")

chain = kt.RelationalModel.from_json(json.dumps({
    "vars": ["p", "q"],
    "states": {"low": [[{"p": 1, "q": 0}]], "high": [[{"p": 1, "q": 1}]]},
    "order": [["low", "high"]],
}))
assert chain.states() == ["low", "high"]
assert not chain.entails("p", "q")
assert not chain.entails("p", "q", engine="oracle")
assert chain.find_violation("p", "q") == "low"
assert chain.minimal_states("p") == ["low"]
assert chain.verify_cumulative()
assert chain.verify_strong_cumulative(["p", "q", "p & q"])
assert chain.check_system_c(["p", "q"]).passed

cycle = kt.RelationalModel.from_json(
    '{"vars": ["p"], "states": {"a": [], "b": []}, "order": [["a", "b"], ["b", "a"]]}'
)
report = cycle.verify_cumulative()
assert not report and report.witnesses == ["subset {a, b} is not smooth at {a, b}"]

label = """inputs 3
g3 = CONST1
g4 = NOT i0
g5 = NOT i1
g6 = NOT i2
g7 = AND g5 i2
g8 = AND g4 g7
g9 = AND i1 g6
g10 = AND i0 g9
g11 = OR g8 g10
outputs g3 g11
"""
empty_order = "inputs 2\ng2 = CONST0\noutputs g2\n"
sm = kt.SuccinctModel("p", 1, label, empty_order)
assert sm.validate()
assert [str(t) for t in sm.label("0")] == ["1"]
assert not sm.entails("T", "p") and sm.find_violation("T", "p") == "1"
assert sm.entails("T", "dep(p)")
assert sm.expand().entails("T", "dep(p)")

print("pyklmteam smoke test: ok")
