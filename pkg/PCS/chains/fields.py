from fractions import Fraction

from django.conf import settings
from django.core.exceptions import ImproperlyConfigured, ValidationError


def is_prime(n):
    """Trial division; characteristics stay small."""
    if n < 2:
        return False
    k = 2
    while k * k <= n:
        if n % k == 0:
            return False
        k += 1
    return True


class Field:
    """
    Ground field of a computation.
    A prime p gives the integers mod p, stored as ints in [0, p).
    Characteristic 0 gives exact rationals (fractions.Fraction).
    """
    CHARACTERISTIC_ZERO = 0

    def __init__(self, characteristic):
        characteristic = int(characteristic)
        if characteristic != self.CHARACTERISTIC_ZERO and not is_prime(characteristic):
            raise ValidationError(
                'Characteristic %(p)s is neither a prime nor 0.',
                code='field_mismatch',
                params={'p': characteristic},
            )
        self.characteristic = characteristic

    @classmethod
    def default(cls):
        """Field named by PCS_FIELD_CHARACTERISTIC."""
        p = getattr(settings, 'PCS_FIELD_CHARACTERISTIC', 2)
        try:
            return cls(p)
        except ValidationError as exc:
            raise ImproperlyConfigured(
                f'PCS_FIELD_CHARACTERISTIC must be a prime or 0, got {p!r}'
            ) from exc

    def __eq__(self, other):
        return isinstance(other, Field) and other.characteristic == self.characteristic

    def __hash__(self):
        return hash(('Field', self.characteristic))

    def __repr__(self):
        return f'Field({self.characteristic})'

    def __str__(self):
        return 'Q' if self.is_rational else f'F{self.characteristic}'

    @property
    def is_rational(self):
        return self.characteristic == self.CHARACTERISTIC_ZERO

    @property
    def zero(self):
        return Fraction(0) if self.is_rational else 0

    @property
    def one(self):
        return Fraction(1) if self.is_rational else 1

    def normalize(self, value):
        if self.is_rational:
            return Fraction(value)
        return int(value) % self.characteristic

    def add(self, a, b):
        return self.normalize(a + b)

    def sub(self, a, b):
        return self.normalize(a - b)

    def mul(self, a, b):
        return self.normalize(a * b)

    def neg(self, a):
        return self.normalize(-a)

    def inverse(self, a):
        a = self.normalize(a)
        if a == 0:
            raise ZeroDivisionError('zero has no inverse')
        if self.is_rational:
            return 1 / a
        return pow(a, -1, self.characteristic)

    def div(self, a, b):
        return self.mul(a, self.inverse(b))

    def sign(self, exponent):
        """(-1)**exponent as a field element."""
        return self.one if exponent % 2 == 0 else self.neg(self.one)

    def elements(self):
        """All elements of a prime field, for exhaustive tests."""
        if self.is_rational:
            raise ValueError('Q is infinite')
        return range(self.characteristic)

    def random_element(self, rng, nonzero=False):
        if self.is_rational:
            value = Fraction(int(rng.integers(-3, 4)), int(rng.integers(1, 4)))
            if nonzero and value == 0:
                return self.one
            return value
        low = 1 if nonzero else 0
        return int(rng.integers(low, self.characteristic))

    def to_json(self, value):
        if self.is_rational:
            value = Fraction(value)
            return str(value) if value.denominator != 1 else value.numerator
        return int(value)
