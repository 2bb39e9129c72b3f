"""
Display and printing functions for the Polymorphism Circuit Workbench
"""

from truth_table import MAJORITY_WITNESSES, index_to_bits


def _banner(title, width=60):
    print("\n" + "=" * width)
    print(title)
    print("=" * width)


def print_truth_table(table):
    """
    Print f• row by row, inputs then the result.

    Args:
        table: TruthTable
    """
    header = " ".join(f"x{i}" for i in range(1, table.arity + 1)) + " | f"
    print(header)
    print("-" * len(header))
    for row in table.rows():
        print("  ".join(str(b) for b in row[:-1]) + "  | " + str(row[-1]))


def print_classification(table, trivial, detected):
    _banner(f"CLASSIFICATION OF {table.bits} (n={table.arity})")
    print_truth_table(table)
    print(f"\nShape: {trivial}")
    if detected:
        print(f"✅ Closed under: {', '.join(op.value for op in detected)}")
    else:
        print("❌ Closed under none of maj, aff, and, or")


def print_polymorphism_witnesses(table, op, selections, fixtures=None):
    """
    Print every selection of distinct rows whose image leaves f•.

    Args:
        table: TruthTable
        op: NamedOperation that was applied
        selections: RowSelections from polymorphism_witnesses
        fixtures: Optional {name: bool} anti-polymorphism membership of w1..w4
    """
    _banner(f"{op.value.upper()} WITNESSES FOR {table.bits}")
    rows = table.rows()
    if not selections:
        print(f"✅ f• is closed under {op.value}")
    for number, selection in enumerate(selections, start=1):
        picked = ", ".join("".join(map(str, rows[r])) for r in selection.rows)
        print(f"  {number:2d}. rows {picked} -> {''.join(map(str, selection.image))} ❌ not in f•")
    if fixtures:
        print("\nFixture membership in Pol̄(f•):")
        for name, member in fixtures.items():
            status = "✅" if member else "  "
            print(f"  {status} {name}")
        print(f"  ({len(MAJORITY_WITNESSES)} majority fixtures, each dropping one argument)")


def print_circuit_check(program, table, wrong_at):
    if wrong_at is None:
        print(f"\n✅ Circuit computes {table.bits} with {program.size} gates")
    else:
        print(f"\n❌ Circuit is wrong at x={''.join(map(str, wrong_at))}")


def print_cover_check(cover, valid, witness, violations=()):
    _banner(f"{cover.flavor.value.upper()} COVER FOR {cover.table.bits} ({cover.size} gates)")
    for condition, gates in violations:
        print(f"  ❌ condition ({condition}) fails for gates {list(gates)}")
    if valid:
        print("✅ COVER IS VALID!")
    elif witness is None:
        print("❌ COVER IS INVALID!")
    else:
        print(f"❌ COVER IS INVALID! {len(witness)} relevant columns, uncovered anti-polymorphism:\n")


def print_tsvnd_report(circuit, report):
    _banner(f"TSVND CHECK (n={circuit.arity}, m={circuit.guess_count}, size {circuit.size})")
    print(f"  {'✅' if report.total else '❌'} total")
    print(f"  {'✅' if report.single_valued else '❌'} single-valued")
    print(f"  {'✅' if report.computes_f else '❌'} computes f")
    for label, points in (
        ("no accepted guess", report.unaccepted),
        ("accepts 0 and 1", report.conflicting),
        ("decides the wrong value", report.mismatched),
    ):
        for x in points:
            print(f"    x={''.join(map(str, x))}: {label}")


def print_decided_function(n, decided):
    print("\nDecided function:")
    for r, value in enumerate(decided):
        shown = "?" if value is None else value
        print(f"  {''.join(map(str, index_to_bits(r, n)))} -> {shown}")


def print_sweep_report(report):
    """
    Print the per-check summary and one line per failing function.

    Args:
        report: SweepReport
    """
    _banner(f"THEOREM SWEEP n={report.arity} checks={','.join(report.checks)}")
    for check, counts in report.summary().items():
        status = "✅" if counts["fail"] == 0 else "❌"
        print(
            f"  {status} {check}: {counts['pass']} pass, {counts['fail']} fail, "
            f"{counts['not_applicable']} not applicable"
        )
    for record in report.failures():
        for check, outcome in record.checks.items():
            if outcome == "fail":
                first_line = record.counterexamples.get(check, "").splitlines()[:1]
                print(f"  ❌ {record.function} {check}: {' '.join(first_line)}")
    print(f"\n{'✅ ALL CHECKS PASSED!' if report.all_passed else '❌ SOME CHECKS FAILED!'}")
