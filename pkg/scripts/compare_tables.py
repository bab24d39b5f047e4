"""Print where the published zero and spectrum tables disagree with computation."""

from cwlap.reference_tables import compare_spectrum, compare_zeros


def main() -> None:
    print("zero tables:")
    for mismatch in compare_zeros():
        print("  ", mismatch)
    issues = compare_spectrum()
    print(f"spectrum table: {len(issues)} index(es) differ")
    for issue in issues[:10]:
        print("  ", issue)
    if len(issues) > 10:
        print("   ...")


if __name__ == "__main__":
    main()
