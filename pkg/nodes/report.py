"""
Report Node
===========
Final step of the verify workflow: the suite passes iff every
deterministic check reported zero violations.
"""

from typing import Any, Dict


def report_node(state: Dict[str, Any]) -> Dict[str, Any]:
    """
    Input State:
        - deterministic: violation counts per check
        - seeds, notes

    Output State:
        - passed: True iff no deterministic check counted a violation
        - notes: input notes plus a warning when no seed ran
    """
    deterministic = state.get("deterministic", {})
    failed = [name for name, count in deterministic.items() if count]
    passed = not failed

    notes = list(state.get("notes", []))
    if not state.get("seeds"):
        notes.append("no seeds given, nothing was checked")

    print("\n" + "=" * 60)
    if passed:
        print("✅ VERIFY PASSED")
    else:
        print(f"❌ VERIFY FAILED: {', '.join(failed)}")
    print("=" * 60)
    for note in notes:
        print(f"   ⚠️ {note}")
    return {"passed": passed, "notes": notes}
