from fractions import Fraction
import random

from hypothesis import HealthCheck, settings, strategies as st

from loopgroup.core_matrix import ChevE, ChevF, GeneratorWord, Whirl

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def positive_fractions(max_num=9, max_den=5):
    return st.builds(Fraction, st.integers(1, max_num), st.integers(1, max_den))


def nonneg_fractions(max_num=9, max_den=5):
    return st.builds(Fraction, st.integers(0, max_num), st.integers(1, max_den))


@st.composite
def positive_tuples(draw, n=None, count=1):
    n = draw(st.integers(1, 4)) if n is None else n
    return [tuple(draw(positive_fractions()) for _ in range(n)) for _ in range(count)]


def rand_frac(rng, lo=1, hi=9, den=5):
    return Fraction(rng.randint(lo, hi), rng.randint(1, den))


def rand_tuple(rng, n, lo=1):
    return tuple(rand_frac(rng, lo) for _ in range(n))


def random_unitriangular_word(rng, n, max_atoms=4, lo=0):
    """Nonnegative word of whirls and upper Chevalley generators."""
    atoms = []
    for _ in range(rng.randint(1, max_atoms)):
        if n == 1 or rng.random() < 0.5:
            atoms.append(Whirl(rand_tuple(rng, n, lo)))
        else:
            atoms.append(ChevE(rng.randint(1, n), rand_frac(rng, lo)))
    return GeneratorWord(n, tuple(atoms))


def random_word(rng, n, max_atoms=5):
    """Nonnegative word that may also contain lower Chevalley generators."""
    atoms = list(random_unitriangular_word(rng, n, max_atoms).atoms)
    if n > 1:
        for _ in range(rng.randint(0, 2)):
            atoms.insert(rng.randint(0, len(atoms)), ChevF(rng.randint(1, n), rand_frac(rng, 0)))
    return GeneratorWord(n, tuple(atoms))


@st.composite
def unitriangular_words(draw, max_atoms=4):
    seed = draw(st.integers(0, 10 ** 9))
    n = draw(st.integers(1, 4))
    return random_unitriangular_word(random.Random(seed), n, max_atoms)
