"""Shared builders for the test suite."""

from predbounds import PatternTable

# two-pattern toy table: pattern a holds (2 pos, 1 neg), pattern b (1 pos, 2 neg)
TOY = PatternTable.from_counts({("a",): (2, 1), ("b",): (1, 2)})

TOY_AR = 2 / 3
TOY_AP = 19 / 30
TOY_AC = 2 / 3
TOY_HINGE = 1 / 3
TOY_SQUARE = 8 / 9
TOY_OVERLAP = 0.9182958340544896


def random_table(rng, max_d=6, max_count=4):
    """Random pattern table; every pattern nonempty, classes unconstrained."""
    d = int(rng.integers(1, max_d + 1))
    entries = {}
    for i in range(d):
        pos = int(rng.integers(0, max_count + 1))
        neg = int(rng.integers(0, max_count + 1))
        if pos + neg == 0:
            pos = 1
        entries[(f"p{i}",)] = (pos, neg)
    return PatternTable.from_counts(entries)


def random_two_class_table(rng, max_d=6, max_count=4):
    while True:
        table = random_table(rng, max_d=max_d, max_count=max_count)
        if table.n_plus > 0 and table.n_minus > 0:
            return table


def random_split_table(rng, table):
    """Split each pattern's counts uniformly into train/test quadruples."""
    from predbounds import SplitTable

    entries = {}
    for key, (pos, neg) in table.entries.items():
        pt = int(rng.integers(0, pos + 1))
        nt = int(rng.integers(0, neg + 1))
        entries[key] = (pt, nt, pos - pt, neg - nt)
    return SplitTable(entries=entries)
