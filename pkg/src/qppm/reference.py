"""Small hand-checked reference instances used by the self-test and the test suite."""

# symmetry operator for n=2, m=4: row r has its single 1 in column SHUFFLE_2_4_COLS[r]
SHUFFLE_2_4_COLS = (0, 2, 4, 6, 8, 10, 12, 14, 1, 3, 5, 7, 9, 11, 13, 15)

CYCLES_2_4 = (
    (0,),
    (15,),
    (5, 10),
    (1, 2, 4, 8),
    (3, 6, 12, 9),
    (7, 14, 13, 11),
)
MULTIPLICITIES_2_4 = (6, 3, 4, 3)

# n=2, m=10
MIN_PERIOD_COUNTS_2_10 = {1: 2, 2: 2, 5: 30, 10: 990}
CYCLE_COUNTS_2_10 = {1: 2, 2: 1, 5: 6, 10: 99}
MULTIPLICITIES_2_10 = (108, 99, 105, 99, 105, 100, 105, 99, 105, 99)

# alpha = sqrt(5), nbar = 0.1, eps = 1e-5
GLAUBER_DIM = 20
GLAUBER_EIGENVALUES = (0.150285, 0.00231095, 0.0000353779, 5.20725e-7)
