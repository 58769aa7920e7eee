"""Published (mean, spread) pairs of the 30-run comparison table.

Order of each row: ESTDA, EMSTDA, Gaussian-EDA, GMM-EDA.
"""

ALGORITHM_ORDER = ("estda", "emstda", "gaussian_eda", "gmm_eda")

ROWS = {
    ("ackley", 2): [(0, 0), (0.0128, 0.0701), (3.1815, 1.3004), (1.5332, 1.8186)],
    ("dejong5", 2): [(18.1207, 1.8130), (3.2370, 2.6410), (19.6536, 1.1683), (6.4677, 6.3530)],
    ("easom", 2): [(-0.9330, 0.2536), (-0.9587, 0.1862), (0.2262, 0.4186), (-0.3153, 0.4589)],
    ("rastrigin", 2): [(0, 0), (0.0050, 0.0202), (0, 0), (0.0182, 0.0643)],
    ("rastrigin", 5): [(0, 2.13e-12), (0.6562, 0.7985), (0, 1.70e-11), (0.3575, 0.6293)],
    ("rastrigin", 10): [(0.0383, 0.0447), (0.5383, 0.5980), (0.0396, 0.0272), (0.5341, 0.8317)],
    ("michalewicz", 2): [(-1.8013, 0), (-1.8013, 0), (-1.8013, 0), (-1.8013, 0)],
    ("michalewicz", 5): [(-4.6877, 9.36e-9), (-4.6404, 0.0561), (-4.6500, 0.0099),
                         (-4.6459, 0.0175)],
    ("michalewicz", 10): [(-9.5384, 0.0475), (-9.4226, 0.2107), (-9.1047, 0.1353),
                          (-9.1426, 0.1415)],
    ("levy13", 2): [(0, 0), (0.0014, 0.0053), (0, 0), (0.0043, 0.0179)],
    ("crossintray", 2): [(-2.0626, 0)] * 4,
    ("dropwave", 2): [(-0.9884, 0.0129), (-0.9909, 0.0125), (-0.9990, 0.0010),
                      (-0.9938, 0.0097)],
    ("eggholder", 2): [(-588.9196, 75.2446), (-731.8013, 145.5383), (-560.7251, 4.2080),
                       (-686.5236, 147.5427)],
    ("griewank", 2): [(19.5764, 3.7905), (1.5197, 5.5576), (30.4232, 1.0396),
                      (15.7949, 16.3001)],
    ("holdertable", 2): [(-19.0835, 0.1918), (-19.2085, 0), (-19.1860, 0.0821),
                         (-19.2085, 0)],
    ("levy", 2): [(0, 0), (0, 0), (0, 0), (0, 1.0605e-4)],
    ("schaffer2", 2): [(0, 1.7064e-6), (0.0001, 4.5280e-4), (0, 0), (0, 2.0208e-4)],
    ("schwefel", 2): [(368.3134, 75.4837), (184.2835, 118.4596), (436.8232, 2.5521),
                      (247.0598, 123.2987)],
    ("shubert", 2): [(-186.7309, 4.05e-13), (-186.7309, 1.64e-13), (-186.7309, 1.38e-4),
                     (-186.7309, 2.48e-5)],
    ("perm0db", 2): [(0, 0), (0, 0), (0, 0), (0, 4.0029e-6)],
    ("rosenbrock", 2): [(0.0420, 0.0418), (0.0036, 0.0129), (0.0477, 0.0558),
                        (0.0151, 0.0382)],
}

PRINTED_SCORES = {"estda": 5, "emstda": 7, "gaussian_eda": 2, "gmm_eda": 0}


def printed_summaries():
    """The table as a list of summary objects ready for ``score_table``."""
    import numpy as np

    from estda.harness import SummaryStats

    out = []
    for (name, dim), cells in ROWS.items():
        for alg, (mean, spread) in zip(ALGORITHM_ORDER, cells):
            out.append(SummaryStats(name, dim, alg, float(mean), float(spread),
                                    np.zeros(0), np.zeros(0), 30))
    return out
