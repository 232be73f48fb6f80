"""Text syntax for Lie series and cyclic forms.

Series print as rational combinations of brackets, `x1 + 1/2*[x1,x2]`;
forms print as combinations of canonical necklaces, `(A dA) + 2/3*(A A A)`.
The parser accepts both printed dialects plus the pairing syntax
`<A,dA> + 1/3*<A,[A,A]>`, is whitespace-insensitive, and reports the
position of the offending token on error. Every printed value re-parses
to an equal one.

Even alphabets print through Lyndon coordinates (sparse and readable);
alphabets with graded letters fall back to the Dynkin form, writing each
letter-count-n slice as 1/n times left-normed bracketings of its words.
"""

import re

from .forms import CyclicForm, pair
from .freelie import (
    LieSeries,
    left_normed_bracket,
    lyndon_coordinates,
    standard_factorization,
)
from .rat import Q


class ParseError(ValueError):
    def __init__(self, message, pos):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


# -- printing -----------------------------------------------------------------------


def _coeff_prefix(c):
    """(sign, magnitude-prefix) with '' for magnitude 1."""
    sign = "-" if c < 0 else "+"
    mag = -c if c < 0 else c
    return sign, "" if mag == 1 else f"{mag}*"


def _join(rendered):
    """Assemble (sign, body) pairs into `a + b - c` text."""
    if not rendered:
        return "0"
    sign, body = rendered[0]
    out = body if sign == "+" else f"-{body}"
    for sign, body in rendered[1:]:
        out += f" {sign} {body}"
    return out


def _lyndon_string(genset, word):
    if len(word) == 1:
        return genset.name(word[0])
    u, v = standard_factorization(word)
    return f"[{_lyndon_string(genset, u)},{_lyndon_string(genset, v)}]"


def _left_normed_string(genset, word):
    out = genset.name(word[0])
    for g in word[1:]:
        out = f"[{out},{genset.name(g)}]"
    return out


def series_to_text(s: LieSeries) -> str:
    if s.is_zero():
        return "0"
    rendered = []
    if s.genset.is_even():
        coords = lyndon_coordinates(s)
        for word in sorted(coords, key=lambda w: (len(w), w)):
            sign, mag = _coeff_prefix(coords[word])
            rendered.append((sign, mag + _lyndon_string(s.genset, word)))
    else:
        for n, part in sorted(s.components().items()):
            for word in sorted(part.terms):
                sign, mag = _coeff_prefix(part.terms[word] / n)
                rendered.append((sign, mag + _left_normed_string(s.genset, word)))
    return _join(rendered)


def form_to_text(form: CyclicForm) -> str:
    if form.is_zero():
        return "0"
    rendered = []
    for word in sorted(form.terms, key=lambda w: (len(w), w)):
        sign, mag = _coeff_prefix(form.terms[word])
        rendered.append((sign, mag + f"({form.genset.word_string(word)})"))
    return _join(rendered)


def word_key(genset, word) -> str:
    """Canonical necklace string used as a JSON key, e.g. `(A dA)`."""
    return f"({genset.word_string(word)})"


# -- tokenizing ---------------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z][A-Za-z0-9]*)|(?P<punct>[\[\]()<>,+\-*/]))"
)


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            bad = len(text) - len(stripped)
            raise ParseError(f"unexpected character {text[bad]!r}", bad)
        if m.lastgroup == "int":
            tokens.append(("int", m.group("int"), m.start("int")))
        elif m.lastgroup == "name":
            tokens.append(("name", m.group("name"), m.start("name")))
        else:
            tokens.append((m.group("punct"), m.group("punct"), m.start("punct")))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text, genset, nmax):
        self.text = text
        self.genset = genset
        self.nmax = nmax
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind):
        tok = self.next()
        if tok[0] != kind:
            raise ParseError(f"expected {kind!r}, found {tok[1] or 'end of input'!r}", tok[2])
        return tok

    def fail(self, message):
        tok = self.peek()
        raise ParseError(message, tok[2])

    # coefficients

    def rational(self):
        tok = self.expect("int")
        num = int(tok[1])
        if self.peek()[0] == "/":
            self.next()
            den = int(self.expect("int")[1])
            if den == 0:
                raise ParseError("zero denominator", tok[2])
            return Q(num, den)
        return Q(num)

    def signed_term(self, term_reader, zero):
        """[sign] (coeff '*' atom | coeff | atom); bare coeff must be 0."""
        sign = Q(1)
        while self.peek()[0] in ("+", "-"):
            if self.next()[0] == "-":
                sign = -sign
        if self.peek()[0] == "int":
            coeff = self.rational()
            if self.peek()[0] == "*":
                self.next()
                return term_reader().scale(sign * coeff)
            if coeff == 0:
                return zero
            self.fail("a bare number other than 0 is not a Lie element")
        return term_reader().scale(sign)

    def sum(self, term_reader, zero):
        out = self.signed_term(term_reader, zero)
        while self.peek()[0] in ("+", "-"):
            tok = self.next()
            rhs = self.signed_term(term_reader, zero)
            out = out + (rhs if tok[0] == "+" else rhs.scale(Q(-1)))
        return out

    # series

    def series_atom(self):
        tok = self.peek()
        if tok[0] == "name":
            self.next()
            try:
                self.genset.index(tok[1])
            except KeyError:
                raise ParseError(f"unknown generator {tok[1]!r}", tok[2]) from None
            return LieSeries.generator(self.genset, tok[1], self.nmax)
        if tok[0] == "[":
            self.next()
            left = self.series_sum()
            self.expect(",")
            right = self.series_sum()
            self.expect("]")
            return left.bracket(right)
        self.fail("expected a generator or '['")

    def series_sum(self):
        return self.sum(self.series_atom, LieSeries.zero(self.genset, self.nmax))

    # forms

    def necklace_word(self):
        letters = []
        start = self.peek()
        while self.peek()[0] == "name":
            tok = self.next()
            try:
                letters.append(self.genset.index(tok[1]))
            except KeyError:
                raise ParseError(f"unknown generator {tok[1]!r}", tok[2]) from None
        if len(letters) < 2:
            raise ParseError("a necklace needs at least two letters", start[2])
        return tuple(letters)

    def form_atom(self):
        tok = self.peek()
        if tok[0] == "<":
            self.next()
            left = self.series_sum()
            self.expect(",")
            right = self.series_sum()
            self.expect(">")
            return pair(left, right)
        if tok[0] == "(":
            self.next()
            word = self.necklace_word()
            self.expect(")")
            return CyclicForm.necklace(self.genset, word, self.nmax)
        self.fail("expected '<' or '('")

    def form_sum(self):
        return self.sum(self.form_atom, CyclicForm.zero(self.genset, self.nmax))

    def finish(self, value):
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"trailing input {tok[1]!r}", tok[2])
        return value


def parse_series(text, genset, nmax) -> LieSeries:
    p = _Parser(text, genset, nmax)
    return p.finish(p.series_sum())


def parse_form(text, genset, nmax) -> CyclicForm:
    p = _Parser(text, genset, nmax)
    return p.finish(p.form_sum())
