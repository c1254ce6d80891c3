import re

CRITERIA = {
    1: "fourth-order residuals, both Racah families, n+m <= 4",
    2: "Wilson/CDH/CH fourth-order residuals, n+m <= 4, realness",
    3: "trivariate six-order residual, n+m+r <= 2, 27 points",
    4: "derived tables: annihilation, parameter shifts, eigenvalues",
    5: "derivative ladders for all seven printed identities",
    6: "coefficient recovery reproduces the printed table",
    7: "second-order and difference-form equations, n+m <= 3",
    8: "TTRR pipeline: generation, monic families, connections",
    9: "operator algebra: product, composition, degree, matrix action",
}


def pytest_runtest_logreport(report):
    # one visible pass/fail line per acceptance criterion
    if report.when != "call":
        return
    match = re.search(r"::test_criterion_(\d+)", report.nodeid)
    if not match:
        return
    num = int(match.group(1))
    outcome = "PASS" if report.passed else "FAIL"
    print(f"\n[acceptance] criterion {num} ({CRITERIA[num]}): {outcome}", flush=True)
