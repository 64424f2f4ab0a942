#!/usr/bin/env python3
"""Builds the synthetic truck-test dataset and its benchmark.

Writes data/truck/ (catalog + CSVs) and data/bench/ (benchmark, gold
responses, few-shot pool, out-of-scope set). Expected tables come from
SQLite running a hand-written SQL twin of every gold RA expression, so they
are computed independently of the C++ engine.

    python3 tools/build_benchmark.py [repo_root]
"""

import csv
import io
import json
import random
import sqlite3
import sys
from datetime import date, timedelta
from pathlib import Path

ROOT = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent
SEED = 20241019

CATALOG = {
    "domain_context": (
        "Release validation for truck software. Every software release candidate is "
        "tested on physical trucks; each test exercises one vehicle component and ends "
        "OK, NOK (failed) or SKIPPED. Gate status GO means the candidate may ship."
    ),
    "tables": {
        "results": {
            "description": "One row per executed test.",
            "columns": {
                "test_id": {"type": "int", "description": "Unique test run id"},
                "name": {"type": "text", "description": "Truck the test ran on", "synonyms": ["truck", "vehicle"]},
                "test_case": {"type": "text", "description": "Test case identifier, e.g. TC-014"},
                "test_result": {
                    "type": "text",
                    "description": "OK, NOK or SKIPPED",
                    "synonyms": ["outcome", "verdict"],
                },
                "release": {
                    "type": "text",
                    "description": "Release candidate under test",
                    "synonyms": ["release candidate", "rc"],
                },
                "component": {"type": "text", "description": "Component exercised by the test", "synonyms": ["ecu"]},
                "test_date": {"type": "date", "description": "Day the test ran"},
                "duration_min": {
                    "type": "float",
                    "nullable": True,
                    "description": "Test duration in minutes; empty for skipped tests",
                    "synonyms": ["duration"],
                },
                "comment": {"type": "text", "nullable": True, "description": "Free-text engineer note"},
            },
        },
        "trucks": {
            "description": "Test fleet.",
            "columns": {
                "truck_name": {"type": "text", "description": "Truck identifier, matches results.name"},
                "model": {"type": "text", "description": "Model family: FH, FM, FMX or FE"},
                "axles": {"type": "int", "description": "Number of axles"},
                "engine": {"type": "text", "description": "D8, D11, D13 or electric"},
                "plant": {"type": "text", "description": "Assembly plant"},
            },
        },
        "components": {
            "description": "Vehicle components under validation.",
            "columns": {
                "comp_name": {"type": "text", "description": "Component name, matches results.component"},
                "subsystem": {"type": "text", "description": "brakes, adas, powertrain, body or chassis"},
                "supplier": {"type": "text", "description": "Supplying company"},
                "asil": {"type": "text", "description": "Safety integrity level: QM, A, B, C or D"},
            },
        },
        "releases": {
            "description": "Software release candidates.",
            "columns": {
                "candidate": {"type": "text", "description": "Release candidate, matches results.release"},
                "release_date": {"type": "date", "description": "Planned release day"},
                "sw_version": {"type": "text", "description": "Software version string"},
                "gate_status": {"type": "text", "description": "GO, NOGO or PENDING", "synonyms": ["gate"]},
                "planned_tests": {"type": "int", "description": "Number of tests planned for the candidate"},
            },
        },
    },
}

TRUCKS = [
    ("TRK-01", "FH", 3, "D13", "Tuve"),
    ("TRK-02", "FH", 2, "D13", "Ghent"),
    ("TRK-03", "FM", 3, "D11", "Umea"),
    ("TRK-04", "FMX", 4, "D13", "Tuve"),
    ("TRK-05", "FE", 2, "electric", "Ghent"),
    ("TRK-06", "FH", 3, "electric", "Umea"),
    ("TRK-07", "FM", 2, "D11", "Tuve"),
    ("TRK-08", "FE", 2, "D8", "Ghent"),
    ("TRK-09", "FMX", 3, "D13", "Umea"),
    ("TRK-10", "FH", 2, "D11", "Ghent"),
    ("TRK-11", "FM", 3, "electric", "Tuve"),
    ("TRK-12", "FE", 2, "D8", "Umea"),  # never tested
]

COMPONENTS = [
    ("ABS", "brakes", "Kestrel", "D"),
    ("EBS", "brakes", "Kestrel", "D"),
    ("ACC", "adas", "Brightline", "C"),
    ("LKA", "adas", "Brightline", "B"),
    ("TCU", "powertrain", "Alder", "B"),
    ("BMS", "powertrain", "Northwind", "C"),
    ("ECU", "powertrain", "Alder", "A"),
    ("HVAC", "body", "Northwind", "QM"),
    ("TPMS", "chassis", "Alder", "A"),
    ("APM", "chassis", "Brightline", "QM"),
]

RELEASES = [
    ("R23.1", date(2023, 9, 15), "5.0.0", "GO", 18),
    ("R23.2", date(2023, 12, 1), "5.1.0", "GO", 24),
    ("R24.1", date(2024, 3, 20), "5.2.0", "NOGO", 30),
    ("R24.2", date(2024, 6, 28), "5.2.1", "GO", 30),
    ("R24.3", date(2024, 9, 30), "5.3.0", "PENDING", 36),
    ("R24.4", date(2024, 12, 16), "6.0.0", "PENDING", 12),
]

TEST_CASES = [f"TC-{i:03d}" for i in range(1, 26)]
COMMENTS = ["retest scheduled", "flaky sensor", "retest passed", "signal delay above threshold", "log missing"]


def make_results(rng):
    rows = []
    tested = [t[0] for t in TRUCKS[:-1]]
    weights = [1.0, 1.0, 1.2, 1.4, 1.4, 0.6]
    for test_id in range(1, 161):
        rel = rng.choices(RELEASES, weights=weights)[0]
        day = rel[1] - timedelta(days=rng.randint(1, 60))
        outcome = rng.choices(["OK", "NOK", "SKIPPED"], weights=[68, 24, 8])[0]
        duration = None if outcome == "SKIPPED" else round(rng.uniform(5, 120), 1)
        comment = rng.choice(COMMENTS) if rng.random() < 0.2 else None
        rows.append(
            (
                test_id,
                rng.choice(tested),
                rng.choice(TEST_CASES),
                outcome,
                rel[0],
                rng.choice(COMPONENTS)[0],
                day.isoformat(),
                duration,
                comment,
            )
        )
    return rows


# (level, category, role, question, gold RA, SQL twin)
# Gold RA sometimes spells columns the way a model would (synonyms, casing,
# small typos) to exercise repair.
QUERIES = [
    # level 1
    (1, "Data Filtering", "mechanical", "Show all failed tests",
     'select[test_result == "NOK"](results)',
     "SELECT * FROM results WHERE test_result = 'NOK'"),
    (1, "Data Filtering", "mechanical", "List the trucks built in Ghent",
     'select[plant == "Ghent"](trucks)',
     "SELECT * FROM trucks WHERE plant = 'Ghent'"),
    (1, "Metadata Queries", "project", "Give me the list of release candidates",
     "project[candidate](releases)",
     "SELECT candidate FROM releases"),
    (1, "Data Filtering", "software", "Which components are rated ASIL D?",
     'select[asil == "D"](components)',
     "SELECT * FROM components WHERE asil = 'D'"),
    (1, "Column Operations", "project", "Sort the releases by release date",
     "sort[release_date](releases)",
     "SELECT * FROM releases ORDER BY release_date"),
    (1, "Column Operations", "mechanical", "Show the names and models of all trucks",
     "project[truck_name, model](trucks)",
     "SELECT truck_name, model FROM trucks"),
    (1, "Data Filtering", "mechanical", "Which tests took longer than 60 minutes?",
     "select[duration_min > 60](results)",
     "SELECT * FROM results WHERE duration_min > 60"),
    (1, "Data Filtering", "project", "Which releases have gate status NOGO?",
     'select[gate_status == "NOGO"](releases)',
     "SELECT * FROM releases WHERE gate_status = 'NOGO'"),
    (1, "Data Filtering", "mechanical", "Show the electric trucks",
     'select[engine == "electric"](trucks)',
     "SELECT * FROM trucks WHERE engine = 'electric'"),
    (1, "Column Operations", "software", "Sort components by supplier",
     "sort[supplier, comp_name](components)",
     "SELECT * FROM components ORDER BY supplier, comp_name"),
    (1, "Data Filtering", "project", "Which tests were run after 1 June 2024?",
     'select[test_date > "2024-06-01"](results)',
     "SELECT * FROM results WHERE test_date > '2024-06-01'"),
    (1, "Data Filtering", "mechanical", "List the test results for truck TRK-07",
     'select[truck == "TRK-07"](results)',
     "SELECT * FROM results WHERE name = 'TRK-07'"),
    (1, "Data Filtering", "software", "Which tests are marked flaky in the comment?",
     'select[contains(comment, "flaky")](results)',
     "SELECT * FROM results WHERE instr(comment, 'flaky') > 0"),
    (1, "Data Filtering", "software", "Show tests whose outcome was SKIPPED",
     'select[outcome == "SKIPPED"](results)',
     "SELECT * FROM results WHERE test_result = 'SKIPPED'"),
    (1, "Data Filtering", "project", "Show all tests from release R24.1",
     'select[Release == "R24.1"](results)',
     "SELECT * FROM results WHERE release = 'R24.1'"),
    (1, "Data Filtering", "mechanical", "Which trucks have more than 2 axles?",
     "select[axles > 2](trucks)",
     "SELECT * FROM trucks WHERE axles > 2"),
    # level 2
    (2, "Duplicate Removal", "software", "List all distinct test cases",
     "distinct(project[test_case](results))",
     "SELECT DISTINCT test_case FROM results"),
    (2, "Duplicate Removal", "mechanical", "Which trucks had failed tests? No duplicates please",
     'distinct(project[name](select[test_result == "NOK"](results)))',
     "SELECT DISTINCT name FROM results WHERE test_result = 'NOK'"),
    (2, "Complex Multi-Condition Queries", "software", "Failed ABS tests in release R24.1",
     'select[test_result == "NOK" and component == "ABS" and release == "R24.1"](results)',
     "SELECT * FROM results WHERE test_result = 'NOK' AND component = 'ABS' AND release = 'R24.1'"),
    (2, "Column Operations", "mechanical", "Show the 5 longest tests",
     "limit[5](sort[duration_min desc, test_id](results))",
     "SELECT * FROM results ORDER BY duration_min DESC, test_id LIMIT 5"),
    (2, "Column Operations", "mechanical", "Names of FH trucks, alphabetically",
     'sort[truck_name](project[truck_name](select[model == "FH"](trucks)))',
     "SELECT truck_name FROM trucks WHERE model = 'FH' ORDER BY truck_name"),
    (2, "Complex Multi-Condition Queries", "software", "Test ids and dates of NOK tests on the TCU",
     'project[test_id, test_date](select[TestResult == "NOK" and component == "TCU"](results))',
     "SELECT test_id, test_date FROM results WHERE test_result = 'NOK' AND component = 'TCU'"),
    (2, "Complex Multi-Condition Queries", "project", "Which releases are GO and planned more than 20 tests?",
     'select[gate_status == "GO" and planned_tests > 20](releases)',
     "SELECT * FROM releases WHERE gate_status = 'GO' AND planned_tests > 20"),
    (2, "Data Filtering", "software", "Components supplied by Kestrel or Alder",
     'select[supplier in ["Kestrel", "Alder"]](components)',
     "SELECT * FROM components WHERE supplier IN ('Kestrel', 'Alder')"),
    (2, "Grouping and Aggregation", "project", "Count the tests per release",
     "groupby[release; count(*) as tests](results)",
     "SELECT release, COUNT(*) AS tests FROM results GROUP BY release"),
    (2, "Complex Multi-Condition Queries", "project", "Tests in June 2024 that failed",
     'select[test_date >= "2024-06-01" and test_date < "2024-07-01" and test_result == "NOK"](results)',
     "SELECT * FROM results WHERE test_date >= '2024-06-01' AND test_date < '2024-07-01' AND test_result = 'NOK'"),
    (2, "Column Operations", "project", "List releases by planned tests, most first",
     "sort[planned_tests desc, candidate](releases)",
     "SELECT * FROM releases ORDER BY planned_tests DESC, candidate"),
    (2, "Table Generation", "software", "Table of components and their ASIL, with the column called component",
     "project[component, asil](rename[comp_name -> component](components))",
     "SELECT comp_name AS component, asil FROM components"),
    (2, "Complex Multi-Condition Queries", "software", "Failed tests with a retest comment",
     'select[contains(comment, "retest") and tst_result == "NOK"](results)',
     "SELECT * FROM results WHERE instr(comment, 'retest') > 0 AND test_result = 'NOK'"),
    (2, "Duplicate Removal", "project", "Which releases have failed tests?",
     'distinct(project[release](select[test_result == "NOK"](results)))',
     "SELECT DISTINCT release FROM results WHERE test_result = 'NOK'"),
    (2, "Data Filtering", "mechanical", "Which trucks have 3 axles and a D13 engine?",
     'select[axles == 3 and engine == "D13"](trucks)',
     "SELECT * FROM trucks WHERE axles = 3 AND engine = 'D13'"),
    (2, "Duplicate Removal", "software", "Which components were tested on TRK-03?",
     'distinct(project[component](select[name == "TRK-03"](results)))',
     "SELECT DISTINCT component FROM results WHERE name = 'TRK-03'"),
    # level 3
    (3, "Duplicate Removal", "mechanical", "Which test cases were run on electric trucks?",
     'distinct(project[test_case](select[engine == "electric"](join[name == truck_name](results, trucks))))',
     "SELECT DISTINCT test_case FROM results JOIN trucks ON name = truck_name WHERE engine = 'electric'"),
    (3, "Complex Multi-Condition Queries", "mechanical", "Trucks that had both OK and NOK results",
     'intersect(project[name](select[test_result == "OK"](results)), '
     'project[name](select[test_result == "NOK"](results)))',
     "SELECT name FROM results WHERE test_result = 'OK' INTERSECT SELECT name FROM results WHERE test_result = 'NOK'"),
    (3, "Data Filtering", "mechanical", "Which trucks were never tested?",
     "minus(project[truck_name](trucks), rename[name -> truck_name](project[name](results)))",
     "SELECT truck_name FROM trucks EXCEPT SELECT name FROM results"),
    (3, "Grouping and Aggregation", "software", "Number of failed tests per component, most first",
     'sort[failures desc, component](groupby[component; count(*) as failures](select[test_result == "NOK"](results)))',
     "SELECT component, COUNT(*) AS failures FROM results WHERE test_result = 'NOK' "
     "GROUP BY component ORDER BY failures DESC, component"),
    (3, "Complex Multi-Condition Queries", "software", "Failed tests on ASIL D components in release R24.2",
     'project[test_id, test_case, comp_name](select[asil == "D" and release == "R24.2" and test_result == "NOK"]'
     "(join[component == comp_name](results, components)))",
     "SELECT test_id, test_case, comp_name FROM results JOIN components ON component = comp_name "
     "WHERE asil = 'D' AND release = 'R24.2' AND test_result = 'NOK'"),
    (3, "Duplicate Removal", "project", "Which suppliers had failing components in release R24.1?",
     'distinct(project[supplier](select[test_result == "NOK" and release == "R24.1"]'
     "(join[component == comp_name](results, components))))",
     "SELECT DISTINCT supplier FROM results JOIN components ON component = comp_name "
     "WHERE test_result = 'NOK' AND release = 'R24.1'"),
    (3, "Conditional Calculations", "project", "Latest failure date per release, by release",
     'sort[release](groupby[release; max(test_date) as last_failure](select[test_result == "NOK"](results)))',
     "SELECT release, MAX(test_date) AS last_failure FROM results WHERE test_result = 'NOK' "
     "GROUP BY release ORDER BY release"),
    (3, "Complex Multi-Condition Queries", "project", "GO release candidates that have failed brake tests",
     'distinct(project[candidate](select[gate_status == "GO" and test_result == "NOK" and subsystem == "brakes"]'
     "(join[component == comp_name](join[release == candidate](results, releases), components))))",
     "SELECT DISTINCT candidate FROM results JOIN releases ON release = candidate "
     "JOIN components ON component = comp_name "
     "WHERE gate_status = 'GO' AND test_result = 'NOK' AND subsystem = 'brakes'"),
    (3, "Complex Multi-Condition Queries", "mechanical", "Trucks tested in every release",
     "divide(project[name, release](results), rename[candidate -> release](project[candidate](releases)))",
     "SELECT DISTINCT name FROM results r WHERE NOT EXISTS (SELECT 1 FROM releases c WHERE NOT EXISTS "
     "(SELECT 1 FROM results r2 WHERE r2.name = r.name AND r2.release = c.candidate))"),
    (3, "Grouping and Aggregation", "mechanical", "Top 3 trucks by number of NOK results",
     'limit[3](sort[failures desc, name](groupby[name; count(*) as failures](select[test_result == "NOK"](results))))',
     "SELECT name, COUNT(*) AS failures FROM results WHERE test_result = 'NOK' "
     "GROUP BY name ORDER BY failures DESC, name LIMIT 3"),
    (3, "Table Generation", "mechanical", "Components with failures on trucks from the Umea plant, with subsystem",
     'distinct(project[comp_name, subsystem](select[plant == "Umea" and test_result == "NOK"]'
     "(join[component == comp_name](join[name == truck_name](results, trucks), components))))",
     "SELECT DISTINCT comp_name, subsystem FROM results JOIN trucks ON name = truck_name "
     "JOIN components ON component = comp_name WHERE plant = 'Umea' AND test_result = 'NOK'"),
    (3, "Complex Multi-Condition Queries", "software", "Test cases that failed in R24.1 and passed in R24.2",
     'intersect(project[test_case](select[release == "R24.1" and test_result == "NOK"](results)), '
     'project[test_case](select[release == "R24.2" and test_result == "OK"](results)))',
     "SELECT test_case FROM results WHERE release = 'R24.1' AND test_result = 'NOK' "
     "INTERSECT SELECT test_case FROM results WHERE release = 'R24.2' AND test_result = 'OK'"),
    # level 4
    (4, "Grouping and Aggregation", "mechanical", "Average test duration per truck model",
     "groupby[model; avg(duration_min) as avg_duration](join[name == truck_name](results, trucks))",
     "SELECT model, AVG(duration_min) AS avg_duration FROM results JOIN trucks ON name = truck_name GROUP BY model"),
    (4, "Conditional Calculations", "project", "Per release: number of tests, number of failures and average duration",
     "project[release, tests, failures, avg_duration](join[release == rel]("
     "groupby[release; count(*) as tests, avg(duration_min) as avg_duration](results), "
     'rename[release -> rel](groupby[release; count(*) as failures](select[test_result == "NOK"](results)))))',
     "SELECT a.release, a.tests, b.failures, a.avg_duration FROM "
     "(SELECT release, COUNT(*) AS tests, AVG(duration_min) AS avg_duration FROM results GROUP BY release) a "
     "JOIN (SELECT release, COUNT(*) AS failures FROM results WHERE test_result = 'NOK' GROUP BY release) b "
     "ON a.release = b.release"),
    (4, "Grouping and Aggregation", "software", "Total, shortest and longest failed-test duration per subsystem",
     "groupby[subsystem; sum(duration_min) as total, min(duration_min) as shortest, max(duration_min) as longest]"
     '(join[component == comp_name](select[test_result == "NOK"](results), components))',
     "SELECT subsystem, SUM(duration_min) AS total, MIN(duration_min) AS shortest, MAX(duration_min) AS longest "
     "FROM results JOIN components ON component = comp_name WHERE test_result = 'NOK' GROUP BY subsystem"),
    (4, "Grouping and Aggregation", "project", "Number of distinct trucks tested per release",
     "groupby[release; count(*) as trucks](distinct(project[release, name](results)))",
     "SELECT release, COUNT(DISTINCT name) AS trucks FROM results GROUP BY release"),
    (4, "Table Generation", "mechanical", "Tests per engine type and result since the start of 2024",
     'groupby[engine, test_result; count(*) as tests](select[test_date >= "2024-01-01"]'
     "(join[name == truck_name](results, trucks)))",
     "SELECT engine, test_result, COUNT(*) AS tests FROM results JOIN trucks ON name = truck_name "
     "WHERE test_date >= '2024-01-01' GROUP BY engine, test_result"),
    (4, "Conditional Calculations", "software", "Failures and most recent failure per ASIL level, highest first",
     "sort[asil desc](groupby[asil; count(*) as failures, max(test_date) as latest]"
     '(join[component == comp_name](select[test_result == "NOK"](results), components)))',
     "SELECT asil, COUNT(*) AS failures, MAX(test_date) AS latest FROM results JOIN components "
     "ON component = comp_name WHERE test_result = 'NOK' GROUP BY asil ORDER BY asil DESC"),
]

# Questions outside what the data can answer. A response is either an
# OUT_OF_SCOPE line or RA the binder must refuse.
SCOPE = [
    ("What is the most beautiful truck?", "OUT_OF_SCOPE: beauty is a subjective judgment not recorded in the test data"),
    ("Will release R24.3 pass its next gate?", "OUT_OF_SCOPE: the data records past tests, not predictions"),
    ("Write a short poem about brake tests", "OUT_OF_SCOPE: creative writing is not a data question"),
    ("Which truck has the nicest paint job?", "```ra\nproject[name, paint_color](results)\n```"),
    ("What is the weather in Gothenburg today?", "OUT_OF_SCOPE: weather is not part of the release data"),
    ("Which test engineer is the happiest?", "```ra\nproject[engineer_mood](results)\n```"),
]

EXAMPLES = [
    ("How many trucks are in the fleet?", "groupby[; count(*) as trucks](trucks)", "An empty key list counts all rows."),
    ("List the suppliers", "distinct(project[supplier](components))", ""),
    ("Show OK tests on release R23.2", 'select[test_result == "OK" and release == "R23.2"](results)',
     "Apply every filter before projecting."),
    ("Number of tests per component", "groupby[component; count(*) as tests](results)", ""),
]


def column_names(table):
    return list(CATALOG["tables"][table]["columns"].keys())


def cell(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def to_csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([cell(v) for v in r])
    return buf.getvalue()


def write(path, text):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def main():
    rng = random.Random(SEED)
    tables = {
        "results": make_results(rng),
        "trucks": TRUCKS,
        "components": COMPONENTS,
        "releases": [(c, d.isoformat(), v, g, n) for c, d, v, g, n in RELEASES],
    }

    db = sqlite3.connect(":memory:")
    for name, rows in tables.items():
        cols = column_names(name)
        db.execute(f"CREATE TABLE {name} ({', '.join(cols)})")
        db.executemany(f"INSERT INTO {name} VALUES ({', '.join('?' * len(cols))})", rows)
        write(ROOT / "data/truck" / f"{name}.csv", to_csv(cols, rows))
    write(ROOT / "data/truck/catalog.json", json.dumps(CATALOG, indent=2) + "\n")

    levels = [q[0] for q in QUERIES]
    assert len(QUERIES) == 50 and [levels.count(i) for i in (1, 2, 3, 4)] == [16, 16, 12, 6], levels

    bench, gold = [], []
    for i, (level, category, role, question, ra, sql) in enumerate(QUERIES, 1):
        cur = db.execute(sql)
        header = [d[0] for d in cur.description]
        rows = cur.fetchall()
        assert rows, f"q{i:02d} has an empty answer"
        rid = f"q{i:02d}"
        bench.append({
            "id": rid, "query": question, "level": level, "category": category, "role": role,
            "expected": {"kind": "table", "csv": to_csv(header, rows)},
        })
        gold.append({"id": rid, "response": f"```ra\n{ra}\n```"})

    scope, scope_gold = [], []
    for i, (question, response) in enumerate(SCOPE, 1):
        rid = f"s{i:02d}"
        scope.append({"id": rid, "query": question, "level": None, "category": "Out of Scope", "role": None,
                      "expected": {"kind": "reject"}})
        scope_gold.append({"id": rid, "response": response})

    questions = {q["query"].lower() for q in bench + scope}
    assert not any(e[0].lower() in questions for e in EXAMPLES)

    def jsonl(items):
        return "".join(json.dumps(x) + "\n" for x in items)

    write(ROOT / "data/bench/benchmark.jsonl", jsonl(bench))
    write(ROOT / "data/bench/gold.jsonl", jsonl(gold))
    write(ROOT / "data/bench/scope.jsonl", jsonl(scope))
    write(ROOT / "data/bench/scope_gold.jsonl", jsonl(scope_gold))
    write(ROOT / "data/bench/examples.jsonl", jsonl({"query": q, "ra": r, "note": n} for q, r, n in EXAMPLES))
    print(f"wrote {len(bench)} benchmark and {len(scope)} scope records")


if __name__ == "__main__":
    main()
