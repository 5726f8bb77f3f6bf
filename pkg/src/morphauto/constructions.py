"""Certificate-producing constructions.

* reshuffle_uniformize: turn a morphism whose length vector is a left
  eigenvector into an explicitly uniform morphism plus a coding.
* minimize_uniform: merge indistinguishable letters of such a certificate.
* block_morphism: induce a morphism on the non-overlapping k-blocks of a
  fixed point.
* cup_transform / verify_back: rewrite a uniform representation into a
  deliberately non-uniform one by splitting one pair of letters, and check
  that the length vector of the result is still a left eigenvector.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .linalg import incidence, left_eigencheck
from .words import (
    Alphabet,
    Coding,
    InternalCheckError,
    Morphism,
    MorphicSpec,
    SpecError,
    Word,
)


class CriterionNotSatisfied(ValueError):
    """The left-eigenvector criterion does not hold for this morphism."""


@dataclass(frozen=True)
class UniformRepresentation:
    """A q-uniform morphism with a coding and a seed: an automaticity
    certificate whose coded fixed point is the sequence it certifies."""

    morphism: Morphism
    coding: Coding
    seed: int

    def __post_init__(self):
        if self.morphism.uniform_length is None or self.morphism.uniform_length < 1:
            raise ValueError("representation morphism must be uniform")
        if self.coding.source != self.morphism.alphabet:
            raise ValueError("coding source must match the morphism alphabet")
        if not 0 <= self.seed < len(self.morphism.alphabet):
            raise ValueError("seed letter out of range")

    @property
    def q(self) -> int:
        return self.morphism.uniform_length

    def to_spec(self) -> MorphicSpec:
        return MorphicSpec(self.morphism, self.seed, self.coding)

    def prefix(self, n: int) -> tuple[str, ...]:
        return self.to_spec().prefix(n)

    def to_morph_text(self, comments=()) -> str:
        return self.to_spec().to_morph_text(comments)


def representation_from_spec(spec: MorphicSpec) -> UniformRepresentation:
    """View a parsed spec as a uniform representation (identity coding when
    the spec carries none)."""
    coding = spec.coding if spec.coding is not None else Coding.identity(spec.morphism.alphabet)
    return UniformRepresentation(spec.morphism, coding, spec.seed)


# ---------------------------------------------------------------------------
# reshuffle to a uniform morphism

def reshuffle_uniformize(m: Morphism, seed: int, q: int | None = None) -> UniformRepresentation:
    """Build the uniform certificate behind the left-eigenvector criterion.

    Every letter i is split into position letters (i, j) for j = 1..|m(i)|.
    Expanding each letter of m(i) into its full run of position letters
    yields a word E_i of length exactly q * |m(i)|; the new morphism sends
    (i, j) to the j-th consecutive q-slice of E_i.  The coding sends (i, j)
    to the j-th letter of m(i), so the coded fixed point reproduces the
    original fixed point letter for letter.
    """
    if m.is_erasing:
        raise CriterionNotSatisfied("reshuffle requires a non-erasing morphism")
    inc = incidence(m)
    lam = left_eigencheck(inc.length_vector, inc.matrix)
    if lam is None:
        raise CriterionNotSatisfied("length vector is not a left eigenvector")
    if lam.denominator != 1:
        raise InternalCheckError("integer matrix produced a non-integer positive eigenvalue")
    if q is not None and q != lam:
        raise CriterionNotSatisfied(f"criterion holds with eigenvalue {lam}, not {q}")
    q = int(lam)
    if q < 2:
        raise CriterionNotSatisfied(f"eigenvalue {q} < 2 certifies nothing")
    if not m.is_prolongable(seed):
        raise SpecError("seed is not prolongable")

    letters = m.alphabet.letters
    lengths = inc.length_vector
    pairs = [(i, j) for i in range(len(letters)) for j in range(1, lengths[i] + 1)]
    index = {pair: n for n, pair in enumerate(pairs)}
    names = tuple(f"{letters[i]}.{j}" for i, j in pairs)
    if len(set(names)) != len(names):
        raise InternalCheckError("expanded letter names collide")
    alpha = Alphabet(names)

    images: list[Word] = [()] * len(pairs)
    table = [0] * len(pairs)
    for i in range(len(letters)):
        expanded: list[int] = []
        for c in m.image(i):
            expanded.extend(index[(c, j)] for j in range(1, lengths[c] + 1))
        if len(expanded) != q * lengths[i]:
            raise InternalCheckError("expansion length disagrees with the eigenvalue")
        for j in range(1, lengths[i] + 1):
            images[index[(i, j)]] = tuple(expanded[(j - 1) * q : j * q])
            table[index[(i, j)]] = m.image(i)[j - 1]

    rep = UniformRepresentation(
        Morphism(alpha, tuple(images)),
        Coding(alpha, m.alphabet, tuple(table)),
        index[(seed, 1)],
    )
    if not rep.morphism.is_prolongable(rep.seed):
        raise InternalCheckError("reshuffled seed lost prolongability")
    return rep


# ---------------------------------------------------------------------------
# minimization (Moore-style partition refinement on the reachable part)

def minimize_uniform(u: UniformRepresentation) -> UniformRepresentation:
    """Coarsest merge of letters that agree on coding output and, position
    by position, on the classes of their images.  The coded fixed point is
    unchanged; the result is a fixpoint of the construction."""
    m, coding = u.morphism, u.coding

    reachable = [u.seed]
    seen = {u.seed}
    pos = 0
    while pos < len(reachable):
        for child in m.image(reachable[pos]):
            if child not in seen:
                seen.add(child)
                reachable.append(child)
        pos += 1
    order = sorted(seen)

    def renumber(key_of):
        fresh: dict = {}
        out = {}
        for letter in order:
            k = key_of(letter)
            if k not in fresh:
                fresh[k] = len(fresh)
            out[letter] = fresh[k]
        return out

    classes = renumber(lambda letter: coding.table[letter])
    while True:
        refined = renumber(
            lambda letter: (classes[letter], tuple(classes[c] for c in m.image(letter)))
        )
        if refined == classes:
            break
        classes = refined

    count = len(set(classes.values()))
    reps = [None] * count
    for letter in order:
        c = classes[letter]
        if reps[c] is None:
            reps[c] = letter
    alpha = Alphabet(tuple(m.alphabet.letters[reps[c]] for c in range(count)))
    images = tuple(tuple(classes[child] for child in m.image(reps[c])) for c in range(count))
    table = tuple(coding.table[reps[c]] for c in range(count))
    return UniformRepresentation(
        Morphism(alpha, images), Coding(alpha, coding.target, table), classes[u.seed]
    )


def iso_equivalent(u1: UniformRepresentation, u2: UniformRepresentation) -> dict[str, str] | None:
    """Letter bijection between two representations, or None.

    Synchronized breadth-first traversal from both seeds, matching images
    position by position and coding outputs token by token.  Both alphabets
    must be fully reachable from their seeds (minimize first if unsure).
    """
    if u1.q != u2.q:
        return None
    if set(u1.coding.target.letters) != set(u2.coding.target.letters):
        return None
    if len(u1.morphism.alphabet) != len(u2.morphism.alphabet):
        return None
    out1, out2 = u1.coding.target.letters, u2.coding.target.letters
    forward = {u1.seed: u2.seed}
    used = {u2.seed}
    queue = [u1.seed]
    while queue:
        x = queue.pop(0)
        y = forward[x]
        if out1[u1.coding.table[x]] != out2[u2.coding.table[y]]:
            return None
        for a, b in zip(u1.morphism.image(x), u2.morphism.image(y)):
            if a in forward:
                if forward[a] != b:
                    return None
            else:
                if b in used:
                    return None
                forward[a] = b
                used.add(b)
                queue.append(a)
    if len(forward) != len(u1.morphism.alphabet):
        return None
    return {
        u1.morphism.alphabet.letters[a]: u2.morphism.alphabet.letters[b]
        for a, b in forward.items()
    }


# ---------------------------------------------------------------------------
# non-overlapping k-block morphisms

class BlockConstructionError(ValueError):
    def __init__(self, message: str, block: str | None = None):
        self.block = block
        super().__init__(message)


@dataclass(frozen=True)
class BlockMorphism:
    """The induced morphism on k-blocks read at positions 0 mod k."""

    k: int
    morphism: Morphism          # over the block alphabet
    blocks: tuple[Word, ...]    # block letter -> its k source letters
    seed_block: int
    source: Morphism

    def flatten_prefix(self, n: int) -> Word:
        """First n letters of the flattened block fixed point."""
        needed = (n + self.k - 1) // self.k
        block_word = MorphicSpec(self.morphism, self.seed_block).uncoded_prefix(needed)
        out: list[int] = []
        for b in block_word:
            out.extend(self.blocks[b])
        return tuple(out[:n])

    def prefix(self, n: int) -> tuple[str, ...]:
        letters = self.source.alphabet.letters
        return tuple(letters[c] for c in self.flatten_prefix(n))

    def rules_text(self) -> str:
        a = self.morphism.alphabet
        return ", ".join(
            f"{tok}->{a.render(img)}" for tok, img in zip(a.letters, self.morphism.images)
        )


def _block_token(alphabet: Alphabet, block: Word) -> str:
    sep = "" if alphabet.single_char else "+"
    return sep.join(alphabet.letters[c] for c in block)


def block_morphism(spec: MorphicSpec, k: int, max_blocks: int | None = None) -> BlockMorphism:
    """Discover the k-blocks at positions 0 mod k of the fixed point.

    Closure: start from the first k letters; for every discovered block b
    the image of b must cut evenly into k-blocks, which are discovered in
    turn.  Raises BlockConstructionError when an image length is not a
    multiple of k or the closure exceeds its bound.
    """
    if k < 2:
        raise ValueError("block length must be at least 2")
    m = spec.morphism
    limit = max_blocks if max_blocks is not None else min(len(m.alphabet) ** k, 20_000)
    seed_block = spec.uncoded_prefix(k)
    blocks: dict[Word, int] = {seed_block: 0}
    order: list[Word] = [seed_block]
    images: list[Word] = []
    pos = 0
    while pos < len(order):
        block = order[pos]
        img = m.apply(block)
        if len(img) % k:
            raise BlockConstructionError(
                f"image of block {_block_token(m.alphabet, block)!r} has length "
                f"{len(img)}, not a multiple of {k}",
                _block_token(m.alphabet, block),
            )
        row = []
        for start in range(0, len(img), k):
            piece = img[start : start + k]
            if piece not in blocks:
                if len(blocks) >= limit:
                    raise BlockConstructionError("block closure exceeded its bound")
                blocks[piece] = len(order)
                order.append(piece)
            row.append(blocks[piece])
        images.append(tuple(row))
        pos += 1
    alpha = Alphabet(tuple(_block_token(m.alphabet, b) for b in order))
    return BlockMorphism(
        k=k,
        morphism=Morphism(alpha, tuple(images)),
        blocks=tuple(order),
        seed_block=0,
        source=m,
    )


# ---------------------------------------------------------------------------
# CUP transform: uniform -> deliberately non-uniform, and the way back

@dataclass(frozen=True)
class CupParams:
    """Where to create the unique pair and where to split its image.

    ``pair_position`` p picks the 2-factor at positions p, p+1 of the
    seed's image (p >= 1 keeps the seed prolongable); ``split_index`` s cuts
    the image of that pair into non-empty halves z, t with |z| = s.
    """

    pair_position: int = 1
    split_index: int = 1


def _fresh_token(taken, base: str) -> str:
    tok = base
    while tok in taken:
        tok += "'"
    return tok


def cup_transform(
    u: UniformRepresentation, params: CupParams | None = None, check_depth: int = 512
) -> MorphicSpec:
    """Represent the fixed point of a uniform morphism non-uniformly.

    Two fresh letters b', c' replace one occurrence of the pair b c inside
    the seed's image; b' expands to z and c' to t where z t is the image of
    b c.  Projecting b' -> b, c' -> c recovers the original fixed point,
    which is verified on a prefix before returning.

    Only uncoded representations are supported; the construction certifies
    the fixed point itself, not a coded image of it.
    """
    if not u.coding.is_identity:
        raise ValueError("cup transform requires an uncoded uniform representation")
    k = u.q
    p, s = (params or CupParams()).pair_position, (params or CupParams()).split_index
    if not 1 <= p <= k - 2:
        raise ValueError(f"pair position must lie in [1, {k - 2}]")
    if not 1 <= s <= 2 * k - 1:
        raise ValueError("split index must leave both halves non-empty")

    seed_img = u.morphism.image(u.seed)
    b, c = seed_img[p], seed_img[p + 1]
    letters = u.morphism.alphabet.letters
    b_tok = _fresh_token(letters, letters[b] + "'")
    c_tok = _fresh_token(letters + (b_tok,), letters[c] + "'")
    alpha = Alphabet(letters + (b_tok, c_tok))
    b_new, c_new = len(letters), len(letters) + 1

    pair_image = u.morphism.image(b) + u.morphism.image(c)
    z, t = pair_image[:s], pair_image[s:]
    images = list(u.morphism.images)
    images[u.seed] = seed_img[:p] + (b_new, c_new) + seed_img[p + 2 :]
    images.extend([z, t])

    projection = Coding(
        alpha, u.morphism.alphabet, tuple(range(len(letters))) + (b, c)
    )
    spec = MorphicSpec(Morphism(alpha, tuple(images)), u.seed, projection)
    if spec.prefix(check_depth) != u.prefix(check_depth):
        raise InternalCheckError("cup transform changed the coded fixed point")
    return spec


def verify_back(obj: MorphicSpec | Morphism) -> tuple[bool, Fraction | None]:
    """Check the left-eigenvector identity L' M' = lambda L' for a spec.

    For any output of :func:`cup_transform` this holds with lambda equal to
    the uniform length of the input, whatever the split.
    """
    m = obj.morphism if isinstance(obj, MorphicSpec) else obj
    inc = incidence(m)
    try:
        lam = left_eigencheck(inc.length_vector, inc.matrix)
    except ValueError:
        return False, None
    return (lam is not None), lam
