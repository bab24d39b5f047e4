from cwlap import reference_tables as rt


def test_zero_table_mismatches_are_the_known_misprints():
    found = {(m.table, m.row, m.col) for m in rt.compare_zeros()}
    expected = {("zeros", 2, p) for p in range(5, 10)}
    expected |= {("prime_zeros", 4, 7), ("prime_zeros", 5, 7), ("prime_zeros", 6, 7), ("prime_zeros", 11, 2)}
    assert found == expected


def test_misprints_break_interlacing():
    bad = {(m.table, m.row, m.col): m for m in rt.compare_zeros()}
    assert not bad[("prime_zeros", 4, 7)].interlacing_ok
    # a plausible-looking typo: 17.0603 still sits between its neighbours
    assert bad[("prime_zeros", 11, 2)].interlacing_ok
    assert "listed" in str(bad[("zeros", 2, 5)])


def test_derivative_table_truncates():
    # at a tolerance of half a unit the truncated entries show up as well
    strict = rt.compare_zeros(tol=0.5e-4)
    assert len(strict) > len(rt.compare_zeros())


def test_spectrum_table_agrees_through_61():
    issues = rt.compare_spectrum()
    assert issues
    first_bad = min(int(s.split(":")[0].split("=")[1]) for s in issues)
    assert first_bad == 62
    assert "listed (1,5)" in issues[0]
