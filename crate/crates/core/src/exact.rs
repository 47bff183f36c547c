//! Exact integer geometry in four coordinates.
//!
//! Everything downstream (face lattices, stratum labels, facet pairings) is
//! decided with integer arithmetic only. Points of the 24-cell are stored as
//! permutations of `(±1, ±1, 0, 0)`; dual points are stored scaled by two so
//! that every facet is a level set `normal · x = 2`.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("empty point set")]
    EmptyPointSet,
    #[error("malformed label `{0}`: expected four entries from {{+, -, 0}}")]
    MalformedLabel(String),
    #[error("invalid signed permutation: {0}")]
    InvalidSignedPerm(String),
}

/// An integer point (or direction) in R^4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Vec4(pub [i64; 4]);

impl Vec4 {
    pub const ZERO: Vec4 = Vec4([0; 4]);

    pub fn new(x: i64, y: i64, z: i64, w: i64) -> Self {
        Vec4([x, y, z, w])
    }

    pub fn dot(&self, other: &Vec4) -> i64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn sub(&self, other: &Vec4) -> Vec4 {
        let mut out = [0; 4];
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.0[i] - other.0[i];
        }
        Vec4(out)
    }

    pub fn zero_count(&self) -> usize {
        self.0.iter().filter(|&&c| c == 0).count()
    }

    /// Sign pattern of the coordinates.
    pub fn signs(&self) -> Label {
        Label(self.0.map(|c| c.signum() as i8))
    }

    /// True for the unscaled 24-cell vertices: two zero entries, two unit entries.
    pub fn is_24cell_vertex(&self) -> bool {
        self.zero_count() == 2 && self.0.iter().all(|c| matches!(c, -1..=1))
    }
}

impl fmt::Display for Vec4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [x, y, z, w] = self.0;
        write!(f, "({x},{y},{z},{w})")
    }
}

/// Dimension of the affine hull of a nonempty point set.
///
/// Fraction-free (Bareiss) elimination on the difference matrix. Pivots are
/// taken from the lowest row index with a nonzero entry in the current column.
pub fn affine_rank(points: &[Vec4]) -> Result<usize, ExactError> {
    let (base, rest) = points.split_first().ok_or(ExactError::EmptyPointSet)?;
    let mut rows: Vec<[i128; 4]> = rest.iter().map(|p| p.sub(base).0.map(i128::from)).collect();
    Ok(integer_rank(&mut rows))
}

fn integer_rank(rows: &mut [[i128; 4]]) -> usize {
    let mut rank = 0;
    let mut prev_pivot: i128 = 1;
    for col in 0..4 {
        if rank == rows.len() {
            break;
        }
        let Some(pivot_row) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot_row);
        let pivot = rows[rank][col];
        let pivot_row = rows[rank];
        for row in rows.iter_mut().skip(rank + 1) {
            let factor = row[col];
            for (x, p) in row.iter_mut().zip(pivot_row) {
                // Bareiss step: exact division by the previous pivot.
                *x = (pivot * *x - factor * p) / prev_pivot;
            }
        }
        prev_pivot = pivot;
        rank += 1;
    }
    rank
}

/// A signed coordinate permutation `x ↦ (s_0 x_{p(0)}, …, s_3 x_{p(3)})`.
///
/// These are exactly the isometries of R^4 preserving the integer lattice
/// and fixing the origin that permute and reflect coordinates; the pairing
/// maps and the symmetry group of the 24-cell used here are all of this form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SignedPerm {
    perm: [u8; 4],
    signs: [i8; 4],
}

impl SignedPerm {
    pub const IDENTITY: SignedPerm = SignedPerm {
        perm: [0, 1, 2, 3],
        signs: [1, 1, 1, 1],
    };

    pub fn new(perm: [u8; 4], signs: [i8; 4]) -> Result<Self, ExactError> {
        let mut seen = [false; 4];
        for &p in &perm {
            if p > 3 || seen[p as usize] {
                return Err(ExactError::InvalidSignedPerm(format!("{perm:?} is not a permutation")));
            }
            seen[p as usize] = true;
        }
        if signs.iter().any(|s| s.abs() != 1) {
            return Err(ExactError::InvalidSignedPerm(format!("signs {signs:?} must be ±1")));
        }
        Ok(SignedPerm { perm, signs })
    }

    /// `F(x,y,z,w) = (x,y,w,z)`.
    pub fn swap_last_two() -> Self {
        SignedPerm {
            perm: [0, 1, 3, 2],
            signs: [1; 4],
        }
    }

    /// `G(x,y,z,w) = (y,x,z,w)`.
    pub fn swap_first_two() -> Self {
        SignedPerm {
            perm: [1, 0, 2, 3],
            signs: [1; 4],
        }
    }

    /// `K(x,y,z,w) = (-y,-x,z,w)`.
    pub fn anti_swap_first_two() -> Self {
        SignedPerm {
            perm: [1, 0, 2, 3],
            signs: [-1, -1, 1, 1],
        }
    }

    /// Reflection in the hyperplane `x_axis = 0`.
    pub fn reflection(axis: usize) -> Self {
        let mut signs = [1; 4];
        signs[axis] = -1;
        SignedPerm {
            perm: [0, 1, 2, 3],
            signs,
        }
    }

    /// Transposition of two coordinates.
    pub fn transposition(a: usize, b: usize) -> Self {
        let mut perm = [0, 1, 2, 3];
        perm.swap(a, b);
        SignedPerm { perm, signs: [1; 4] }
    }

    pub fn perm(&self) -> [u8; 4] {
        self.perm
    }

    pub fn signs(&self) -> [i8; 4] {
        self.signs
    }

    pub fn apply(&self, v: &Vec4) -> Vec4 {
        let mut out = [0; 4];
        for (i, o) in out.iter_mut().enumerate() {
            *o = i64::from(self.signs[i]) * v.0[self.perm[i] as usize];
        }
        Vec4(out)
    }

    /// Action on sign labels; zero entries are fixed by the sign flips.
    pub fn apply_to_label(&self, l: &Label) -> Label {
        let mut out = [0; 4];
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.signs[i] * l.0[self.perm[i] as usize];
        }
        Label(out)
    }

    /// Where input coordinate `j` lands in the output.
    pub fn position_of(&self, j: usize) -> usize {
        self.perm
            .iter()
            .position(|&p| p as usize == j)
            .expect("perm is a bijection")
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &SignedPerm) -> SignedPerm {
        let mut perm = [0; 4];
        let mut signs = [1; 4];
        for i in 0..4 {
            let inner = self.perm[i] as usize;
            perm[i] = other.perm[inner];
            signs[i] = self.signs[i] * other.signs[inner];
        }
        SignedPerm { perm, signs }
    }

    pub fn inverse(&self) -> SignedPerm {
        let mut perm = [0; 4];
        let mut signs = [1; 4];
        for i in 0..4 {
            let j = self.perm[i] as usize;
            perm[j] = i as u8;
            signs[j] = self.signs[i];
        }
        SignedPerm { perm, signs }
    }

    /// Determinant of the associated orthogonal matrix, always ±1.
    pub fn determinant(&self) -> i8 {
        let sign_product: i8 = self.signs.iter().product();
        permutation_parity(&self.perm) * sign_product
    }
}

impl fmt::Display for SignedPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const NAMES: [char; 4] = ['x', 'y', 'z', 'w'];
        write!(f, "(x,y,z,w)↦(")?;
        for i in 0..4 {
            if i > 0 {
                write!(f, ",")?;
            }
            let sign = if self.signs[i] < 0 { "-" } else { "" };
            write!(f, "{sign}{}", NAMES[self.perm[i] as usize])?;
        }
        write!(f, ")")
    }
}

/// +1 for even permutations, -1 for odd ones.
pub fn permutation_parity(perm: &[u8]) -> i8 {
    let mut inversions = 0;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Closure of the coordinate reflections and transpositions under composition.
pub fn hyperoctahedral_group() -> Vec<SignedPerm> {
    let mut generators: Vec<SignedPerm> = (0..4).map(SignedPerm::reflection).collect();
    for a in 0..4 {
        for b in a + 1..4 {
            generators.push(SignedPerm::transposition(a, b));
        }
    }
    let mut seen = BTreeSet::from([SignedPerm::IDENTITY]);
    let mut queue = VecDeque::from([SignedPerm::IDENTITY]);
    while let Some(g) = queue.pop_front() {
        for h in &generators {
            let next = h.compose(&g);
            if seen.insert(next) {
                queue.push_back(next);
            }
        }
    }
    seen.into_iter().collect()
}

/// A 4-tuple over `{+, -, 0}` naming a cusp, 2-stratum or 3-stratum.
///
/// Entries are stored as `-1`, `0`, `+1`; the derived order is therefore
/// lexicographic with `- < 0 < +`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(pub(crate) [i8; 4]);

impl Label {
    pub fn new(entries: [i8; 4]) -> Result<Self, ExactError> {
        if entries.iter().any(|e| !matches!(e, -1..=1)) {
            return Err(ExactError::MalformedLabel(format!("{entries:?}")));
        }
        Ok(Label(entries))
    }

    pub fn entries(&self) -> [i8; 4] {
        self.0
    }

    pub fn zero_count(&self) -> usize {
        self.0.iter().filter(|&&e| e == 0).count()
    }

    pub fn zero_positions(&self) -> Vec<usize> {
        (0..4).filter(|&i| self.0[i] == 0).collect()
    }

    pub fn minus_count(&self) -> usize {
        self.0.iter().filter(|&&e| e < 0).count()
    }

    pub fn negate(&self) -> Label {
        Label(self.0.map(|e| -e))
    }

    pub fn with_entry(&self, position: usize, value: i8) -> Label {
        let mut entries = self.0;
        entries[position] = value;
        Label(entries)
    }

    /// The stratum incidence rule: every nonzero entry of `self` agrees with
    /// the corresponding entry of `other`.
    pub fn refines_into(&self, other: &Label) -> bool {
        (0..4).all(|i| self.0[i] == 0 || self.0[i] == other.0[i])
    }

    pub fn to_vec4(&self) -> Vec4 {
        Vec4(self.0.map(i64::from))
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            let c = match e {
                1 => '+',
                -1 => '-',
                _ => '0',
            };
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl FromStr for Label {
    type Err = ExactError;

    /// Accepts `(+,+,-,0)`, `++-0`, and the typographic minus `−`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let entries: Vec<i8> = s
            .chars()
            .filter(|c| !matches!(c, '(' | ')' | ',' | ' '))
            .map(|c| match c {
                '+' => Ok(1),
                '-' | '−' => Ok(-1),
                '0' => Ok(0),
                _ => Err(ExactError::MalformedLabel(s.to_string())),
            })
            .collect::<Result<_, _>>()?;
        let entries: [i8; 4] = entries
            .try_into()
            .map_err(|_| ExactError::MalformedLabel(s.to_string()))?;
        Ok(Label(entries))
    }
}

impl Serialize for Label {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Shorthand used throughout the crate and its tests. Panics on malformed input.
pub fn label(s: &str) -> Label {
    s.parse().unwrap_or_else(|e| panic!("{e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_point_has_rank_zero() {
        assert_eq!(affine_rank(&[Vec4::new(1, 1, 0, 0)]).unwrap(), 0);
    }

    #[test]
    fn empty_point_set_is_an_error() {
        assert_eq!(affine_rank(&[]), Err(ExactError::EmptyPointSet));
    }

    #[test]
    fn three_points_span_a_plane() {
        let pts = [Vec4::new(1, 1, 0, 0), Vec4::new(1, -1, 0, 0), Vec4::new(1, 0, 1, 0)];
        assert_eq!(affine_rank(&pts).unwrap(), 2);
    }

    #[test]
    fn facet_x1_eq_1_spans_a_hyperplane() {
        let pts: Vec<Vec4> = [
            [1, 1, 0, 0],
            [1, -1, 0, 0],
            [1, 0, 1, 0],
            [1, 0, -1, 0],
            [1, 0, 0, 1],
            [1, 0, 0, -1],
        ]
        .into_iter()
        .map(Vec4)
        .collect();
        assert_eq!(affine_rank(&pts).unwrap(), 3);
    }

    #[test]
    fn collinear_and_repeated_points() {
        let pts = [
            Vec4::new(0, 0, 0, 0),
            Vec4::new(2, 4, 6, 8),
            Vec4::new(1, 2, 3, 4),
            Vec4::new(0, 0, 0, 0),
        ];
        assert_eq!(affine_rank(&pts).unwrap(), 1);
    }

    #[test]
    fn named_pairing_maps() {
        let f = SignedPerm::swap_last_two();
        assert_eq!(f.apply(&Vec4::new(0, 0, 1, -1)), Vec4::new(0, 0, -1, 1));
        let k = SignedPerm::anti_swap_first_two();
        assert_eq!(k.apply(&Vec4::new(1, 1, 0, 0)), Vec4::new(-1, -1, 0, 0));
        assert_eq!(k.apply(&Vec4::new(3, 5, 7, 11)), Vec4::new(-5, -3, 7, 11));
        let v = Vec4::new(3, -5, 7, 11);
        assert_eq!(SignedPerm::IDENTITY.apply(&v), v);
    }

    #[test]
    fn label_action() {
        let f = SignedPerm::swap_last_two();
        let g = SignedPerm::swap_first_two();
        assert_eq!(f.apply_to_label(&label("++-+")), label("+++-"));
        assert_eq!(g.apply_to_label(&label("+-++")), label("-+++"));
        for m in hyperoctahedral_group() {
            assert_eq!(m.apply_to_label(&label("0000")), label("0000"));
        }
    }

    #[test]
    fn pairing_maps_are_orientation_reversing_in_r4() {
        assert_eq!(SignedPerm::swap_last_two().determinant(), -1);
        assert_eq!(SignedPerm::swap_first_two().determinant(), -1);
        assert_eq!(SignedPerm::anti_swap_first_two().determinant(), -1);
        assert_eq!(SignedPerm::IDENTITY.determinant(), 1);
    }

    #[test]
    fn group_generated_by_reflections_and_transpositions_has_order_384() {
        let group = hyperoctahedral_group();
        assert_eq!(group.len(), 384);
        assert_eq!(group.iter().filter(|g| g.determinant() == 1).count(), 192);
    }

    #[test]
    fn label_parsing_and_display() {
        assert_eq!(label("(+,-,0,−)").entries(), [1, -1, 0, -1]);
        assert_eq!(label("+-0-").to_string(), "(+,-,0,-)");
        assert!("(+,+,+)".parse::<Label>().is_err());
        assert!("(+,+,x,+)".parse::<Label>().is_err());
    }

    #[test]
    fn rejects_bad_signed_perm() {
        assert!(SignedPerm::new([0, 0, 1, 2], [1; 4]).is_err());
        assert!(SignedPerm::new([0, 1, 2, 3], [1, 2, 1, 1]).is_err());
    }

    #[test]
    fn position_of_tracks_coordinates() {
        let m = SignedPerm::new([2, 0, 3, 1], [1, -1, 1, 1]).unwrap();
        let v = Vec4::new(10, 20, 30, 40);
        let image = m.apply(&v);
        for j in 0..4 {
            assert_eq!(image.0[m.position_of(j)].abs(), v.0[j]);
        }
    }

    /// Rank as the largest nonvanishing minor, by Leibniz expansion.
    fn brute_force_rank(points: &[Vec4]) -> usize {
        fn det(m: &[Vec<i128>]) -> i128 {
            if m.is_empty() {
                return 1;
            }
            (0..m.len())
                .map(|c| {
                    let minor: Vec<Vec<i128>> = m[1..]
                        .iter()
                        .map(|row| {
                            row.iter()
                                .enumerate()
                                .filter(|&(j, _)| j != c)
                                .map(|(_, &x)| x)
                                .collect()
                        })
                        .collect();
                    let sign = if c % 2 == 0 { 1 } else { -1 };
                    sign * m[0][c] * det(&minor)
                })
                .sum()
        }
        fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
            (0u32..1 << n)
                .filter(|m| m.count_ones() as usize == k)
                .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
                .collect()
        }
        let rows: Vec<Vec<i128>> = points[1..]
            .iter()
            .map(|p| p.sub(&points[0]).0.map(i128::from).to_vec())
            .collect();
        (1..=4.min(rows.len()))
            .rev()
            .find(|&k| {
                subsets(rows.len(), k).iter().any(|rs| {
                    subsets(4, k).iter().any(|cs| {
                        let m: Vec<Vec<i128>> = rs.iter().map(|&r| cs.iter().map(|&c| rows[r][c]).collect()).collect();
                        det(&m) != 0
                    })
                })
            })
            .unwrap_or(0)
    }

    #[test]
    fn oracle_agrees_on_hand_examples() {
        let facet: Vec<Vec4> = [
            [1, 1, 0, 0],
            [1, -1, 0, 0],
            [1, 0, 1, 0],
            [1, 0, -1, 0],
            [1, 0, 0, 1],
            [1, 0, 0, -1],
        ]
        .into_iter()
        .map(Vec4)
        .collect();
        assert_eq!(brute_force_rank(&facet), 3);
        assert_eq!(brute_force_rank(&facet[..3]), 2);
        assert_eq!(brute_force_rank(&facet[..1]), 0);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn signed_perm() -> impl Strategy<Value = SignedPerm> {
            (0usize..384).prop_map(|i| hyperoctahedral_group()[i])
        }

        fn vec4() -> impl Strategy<Value = Vec4> {
            prop::array::uniform4(-50i64..50).prop_map(Vec4)
        }

        proptest! {
            #[test]
            fn inverse_undoes_apply(m in signed_perm(), v in vec4()) {
                prop_assert_eq!(m.inverse().apply(&m.apply(&v)), v);
            }

            #[test]
            fn composition_is_associative(a in signed_perm(), b in signed_perm(), c in signed_perm(), v in vec4()) {
                prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
                prop_assert_eq!(a.compose(&b).apply(&v), a.apply(&b.apply(&v)));
            }

            #[test]
            fn determinant_is_multiplicative(a in signed_perm(), b in signed_perm()) {
                prop_assert_eq!(a.compose(&b).determinant(), a.determinant() * b.determinant());
            }

            #[test]
            fn rank_matches_minor_oracle(pts in prop::collection::vec(prop::array::uniform4(-3i64..4).prop_map(Vec4), 1..7)) {
                prop_assert_eq!(affine_rank(&pts).unwrap(), super::brute_force_rank(&pts));
            }

            #[test]
            fn label_action_matches_vector_action(m in signed_perm(), v in vec4()) {
                prop_assert_eq!(m.apply_to_label(&v.signs()), m.apply(&v).signs());
            }
        }
    }
}
