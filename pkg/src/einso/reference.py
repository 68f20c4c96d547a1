"""Published reference values that the verification harness reproduces.

Everything here was transcribed from the published classification of
invariant Einstein metrics on special orthogonal groups obtained from
three-block decompositions; the harness recomputes each quantity from
scratch and compares.  Coefficient lists are highest degree first, exactly
as printed.
"""

from fractions import Fraction

# the degree-24 eliminant factor for the (3,3,1) system, highest first
H1_COEFFS = [
    9078544800000,
    -87978150000000,
    416122213455000,
    -1222223075437500,
    2532878590309970,
    -4171390831990050,
    5900094406718764,
    -7070644584919459,
    6230617318198202,
    -4091340309226802,
    1722695469975774,
    983550542994755,
    -2624020500593532,
    983550542994755,
    1722695469975774,
    -4091340309226802,
    6230617318198202,
    -7070644584919459,
    5900094406718764,
    -4171390831990050,
    2532878590309970,
    -1222223075437500,
    416122213455000,
    -87978150000000,
    9078544800000,
]

# cofactors of h1 in the (3,3,1) eliminant, as text in the variable x13
ELIMINANT_FACTORS_331 = [
    "x13 - 1",
    "6 x13^3 - 44 x13^2 + 90 x13 - 45",
    "45 x13^3 - 90 x13^2 + 44 x13 - 6",
]

# the degree-28 eliminant factor for the (4,3,1) system, highest first
H2_COEFFS = [
    5426775507148489670400,
    -85161185092622977873920,
    643415930216926223949312,
    -3054548385819855899001216,
    10179140499777121100664800,
    -25585147362416655835236384,
    51380426324079059150364272,
    -85934185504663087173249048,
    120352447918421302289568863,
    -136938372384910964649260802,
    121268417379459335461167457,
    -78483773118912467818333590,
    32048679980888195807658286,
    -21037081214018592447662850,
    96567724403906545251348604,
    -279673822213789859470643520,
    527833035046902978479331387,
    -769632045866390647274523642,
    937521733316934021780397473,
    -973318915329328329165562374,
    864907599634224063462448416,
    -664413545084655303518836950,
    442175543674339070418041970,
    -249282932584983174857359764,
    114233981412525395978707920,
    -40474281023127469650239100,
    10382320721058779134026000,
    -1735984447231701886065000,
    146138820428187141975000,
]

ELIMINANT_FACTORS_431 = [
    "x13 - 5",
    "x13 - 1",
    "7 x13^2 - 24 x13 + 14",
    "287 x13^3 - 625 x13^2 + 369 x13 - 63",
]


def specialized_system_texts(n: int) -> list:
    """The three published generators of the specialized (n-6,3,3) system
    (x12 = x13 = 1, x2 = x3), as text in x1, x2, x23."""
    return [
        f"-{n} x1 x2^2 x23^2 + {n} x2 x23^2 + 6 x1^2 x2 x23^2 + 6 x1 x2^2 x23^2"
        " - 3 x1 x2^2 - x1 x23^2 - 8 x2 x23^2",
        f"{n} x1 x2 x23^2 + {n} x2^2 x23^2 - 2 {n} x2 x23^2 - 7 x1 x2 x23^2"
        " - 4 x2^2 x23^2 + 3 x2^2 + 3 x2 x23^3 + 4 x2 x23^2 + x23^2",
        f"-{n} x1 x23^2 - {n} x23^3 + 2 {n} x23^2 + 7 x1 x23^2 - 2 x2 x23^2"
        " + 4 x2 + 3 x23^3 - 4 x23^2 - 8 x23",
    ]


def specialized_eliminant_coeffs(n: int) -> list:
    """Degree-8 eliminant in x23 for the (n-6,3,3) system specialized by
    x12 = x13 = 1, x2 = x3 (x2 != x23 enforced); lowest degree first."""
    return [
        2704 * (n - 1),
        -728 * (n - 2) * (n + 5),
        49 * n**3 + 1658 * n**2 - 6539 * n + 836,
        -2 * (n - 2) * (157 * n**2 - 157 * n - 2778),
        14 * n**4 + 273 * n**3 - 3034 * n**2 + 5687 * n + 1164,
        -44 * (n - 6) * (n - 3) * (n - 2) * (n + 2),
        (n - 6) * (n**4 + 26 * n**3 - 269 * n**2 + 686 * n - 516),
        -2 * (n - 6) ** 2 * (n - 2) * (n**2 - n + 6),
        (n - 6) ** 2 * (n - 3) * (n**2 - 7 * n + 24),
    ]


# approximate scaled coordinates (x1, x2, x12, x23, x13) of the published
# non-naturally-reductive metrics
SO7_NON_NR_SCALED = (0.0564701, 0.0528085, 0.438178, 0.470542, 0.20018)
SO7_ELIMINANT_ROOTS = (0.4254295, 2.350565)
SO7_RAW_SOLUTION = (0.4254295, 0.9312204, 0.1200109, 0.1122291)  # (x13, x12, x1, x2)

SO8_NON_NR_SCALED = [
    (0.097516624, 0.043773055, 0.42753231, 0.47140698, 0.22713855),
    (0.090168527, 0.046935893, 0.44028850, 0.16491085, 0.46120545),
]
SO8_ELIMINANT_ROOTS = (0.48183112, 2.7966957)
SO8_RAW_SOLUTIONS = [
    (0.48183112, 0.90692827, 0.20686292, 0.092856189),
    (2.7966957, 2.6698577, 0.54677135, 0.28461374),
]


def tower_families(n: int) -> list:
    """The three exact Einstein metrics of the (n-2,1,1) shape, as
    (x1, x12, x13, x23) tuples."""
    den = n**3 - 2 * n**2 + n - 4
    return [
        (Fraction(1), Fraction(1), Fraction(1), Fraction(1)),
        (Fraction(n - 3, n - 1), Fraction(1), Fraction(n - 3, n - 1), Fraction(1)),
        (
            Fraction((n - 4) * (n - 1) ** 2, den),
            Fraction((n - 1) * (n**2 - 3 * n + 4), den),
            Fraction((n - 1) * (n**2 - 3 * n + 4), den),
            Fraction(1),
        ),
    ]


# (non naturally reductive, naturally reductive) counts up to isometry
TABLE_COUNTS = {
    (3, 1, 1): (0, 3),
    (2, 2, 1): (0, 3),
    (4, 1, 1): (0, 3),
    (3, 2, 1): (0, 5),
    (2, 2, 2): (0, 2),
    (5, 1, 1): (0, 3),
    (4, 2, 1): (0, 6),
    (3, 3, 1): (1, 5),
    (3, 2, 2): (0, 5),
    (6, 1, 1): (0, 3),
    (5, 2, 1): (0, 6),
    (4, 3, 1): (2, 7),
    (4, 2, 2): (0, 5),
    (3, 3, 2): (1, 5),
    (7, 1, 1): (0, 3),
    (6, 2, 1): (0, 6),
    (5, 3, 1): (2, 8),
    (5, 2, 2): (0, 5),
    (4, 3, 2): (2, 8),
    (4, 4, 1): (2, 5),
    (3, 3, 3): (2, 5),
}
