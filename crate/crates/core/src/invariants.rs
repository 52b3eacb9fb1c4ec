//! Kauffman bracket, Jones polynomial and Goeritz determinant of PD codes.

use std::collections::VecDeque;

use crate::pd::{PdCode, PdError};
use crate::poly::{LaurentPolynomial, Variable};

/// Practical ceiling for the state sum.
pub const MAX_STATE_SUM_CROSSINGS: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InvariantError {
    #[error(transparent)]
    Pd(#[from] PdError),
    #[error("{0} crossings is too many for the state sum")]
    TooLarge(usize),
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns true when two classes were merged.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

/// Bracket in `A`, normalized so the crossingless circle is 1.
pub fn kauffman_bracket(pd: &PdCode) -> Result<LaurentPolynomial, InvariantError> {
    pd.validate()?;
    let n = pd.len();
    if n == 0 {
        return Ok(LaurentPolynomial::one(Variable::A));
    }
    if n > MAX_STATE_SUM_CROSSINGS {
        return Err(InvariantError::TooLarge(n));
    }
    let arcs = 2 * n;
    // counts[a][loops]: number of states with `a` A-smoothings and `loops` circles.
    let mut counts = vec![vec![0i64; arcs + 2]; n + 1];
    for state in 0u64..(1u64 << n) {
        let mut uf = UnionFind::new(arcs);
        let mut components = arcs;
        for (c, x) in pd.pd.iter().enumerate() {
            let [a, b, cc, d] = x.map(|l| l as usize - 1);
            let (p, q) = if state >> c & 1 == 0 { ((a, b), (cc, d)) } else { ((a, d), (b, cc)) };
            components -= usize::from(uf.union(p.0, p.1));
            components -= usize::from(uf.union(q.0, q.1));
        }
        let a_count = n - state.count_ones() as usize;
        counts[a_count][components] += 1;
    }

    let delta = LaurentPolynomial::from_terms(Variable::A, [(2, -1), (-2, -1)]);
    let mut delta_pows = vec![LaurentPolynomial::one(Variable::A)];
    for i in 1..=arcs {
        let next = &delta_pows[i - 1] * &delta;
        delta_pows.push(next);
    }
    let mut out = LaurentPolynomial::zero(Variable::A);
    for (a_count, row) in counts.iter().enumerate() {
        let exp = a_count as i32 - (n - a_count) as i32;
        for (loops, &k) in row.iter().enumerate() {
            if k != 0 {
                out = &out + &delta_pows[loops - 1].shift(exp).scale(k);
            }
        }
    }
    Ok(out)
}

/// `(-A^3)^(-w) <D>` with `A = q^-1`, where `q^4 = t`.
pub fn jones_polynomial(pd: &PdCode, writhe: i64) -> Result<LaurentPolynomial, InvariantError> {
    let bracket = kauffman_bracket(pd)?;
    let w = writhe as i32;
    let sign = if w % 2 == 0 { 1 } else { -1 };
    let normalized = bracket.shift(-3 * w).scale(sign);
    Ok(normalized.scale_exponents(-1, Variable::Q))
}

/// Jones polynomial using the diagram's own writhe.
pub fn jones(pd: &PdCode) -> Result<LaurentPolynomial, InvariantError> {
    let w = pd.writhe()?;
    jones_polynomial(pd, w)
}

/// `V(t)` at `t = -1` from a `q`-polynomial; `None` if some exponent is not a
/// multiple of 4.
pub fn jones_at_minus_one(v: &LaurentPolynomial) -> Option<i64> {
    v.terms().try_fold(0i64, |acc, (e, c)| {
        if e % 4 != 0 {
            return None;
        }
        Some(acc + if (e / 4) % 2 == 0 { c } else { -c })
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoeritzData {
    /// 0 or 1 per face; faces of colour 0 index the matrix.
    pub face_colour: Vec<u8>,
    /// Face ids of the colour-0 faces, in matrix order.
    pub white_faces: Vec<usize>,
    /// Unreduced, symmetric, rows summing to zero.
    pub matrix: Vec<Vec<i64>>,
}

pub fn goeritz(pd: &PdCode) -> Result<GoeritzData, InvariantError> {
    let map = pd.planar_map()?;
    let n = pd.len();
    let faces = map.face_count;
    if n == 0 {
        return Ok(GoeritzData { face_colour: vec![0, 1], white_faces: vec![0], matrix: vec![vec![0]] });
    }
    // Faces on the two sides of an arc end get different colours.
    let mut adj = vec![Vec::new(); faces];
    for f in &map.corner_face {
        for p in 0..4 {
            let (x, y) = (f[(p + 3) % 4], f[p]);
            adj[x].push(y);
            adj[y].push(x);
        }
    }
    let mut colour = vec![u8::MAX; faces];
    colour[0] = 0;
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for &y in &adj[x] {
            if colour[y] == u8::MAX {
                colour[y] = 1 - colour[x];
                queue.push_back(y);
            } else {
                debug_assert_ne!(colour[y], colour[x], "planar maps are two-colourable");
            }
        }
    }
    let white_faces: Vec<usize> = (0..faces).filter(|&f| colour[f] == 0).collect();
    let index = |f: usize| white_faces.iter().position(|&w| w == f).expect("white face");
    let m = white_faces.len();
    let mut matrix = vec![vec![0i64; m]; m];
    for f in &map.corner_face {
        let (q, eta) = if colour[f[1]] == 0 { (1, 1) } else { (0, -1) };
        let (i, j) = (index(f[q]), index(f[q + 2]));
        if i != j {
            matrix[i][j] -= eta;
            matrix[j][i] -= eta;
            matrix[i][i] += eta;
            matrix[j][j] += eta;
        }
    }
    Ok(GoeritzData { face_colour: colour, white_faces, matrix })
}

/// Exact determinant by fraction-free elimination.
pub fn integer_determinant(matrix: &[Vec<i64>]) -> i128 {
    let m = matrix.len();
    if m == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = matrix.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..m - 1 {
        if a[k][k] == 0 {
            match (k + 1..m).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..m {
            for j in k + 1..m {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[m - 1][m - 1]
}

/// Knot determinant: |det| of the Goeritz matrix with one row and column removed.
pub fn determinant(pd: &PdCode) -> Result<u64, InvariantError> {
    let g = goeritz(pd)?;
    let m = g.matrix.len();
    let reduced: Vec<Vec<i64>> = g.matrix[..m - 1].iter().map(|r| r[..m - 1].to_vec()).collect();
    Ok(integer_determinant(&reduced).unsigned_abs() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pd::tests::{figure_eight, positive_kink, trefoil};
    use crate::poly::bracket_span;

    #[test]
    fn empty_bracket_is_one() {
        assert_eq!(kauffman_bracket(&PdCode::default()).unwrap(), LaurentPolynomial::one(Variable::A));
        assert_eq!(jones(&PdCode::default()).unwrap(), LaurentPolynomial::one(Variable::Q));
        assert_eq!(determinant(&PdCode::default()).unwrap(), 1);
    }

    #[test]
    fn kink_brackets() {
        let k = positive_kink();
        assert_eq!(kauffman_bracket(&k).unwrap(), LaurentPolynomial::monomial(Variable::A, -1, 3));
        let m = k.mirror().unwrap();
        assert_eq!(kauffman_bracket(&m).unwrap(), LaurentPolynomial::monomial(Variable::A, -1, -3));
        assert_eq!(jones(&k).unwrap(), LaurentPolynomial::one(Variable::Q));
        assert_eq!(determinant(&k).unwrap(), 1);
    }

    #[test]
    fn trefoil_by_hand() {
        // The standard diagram's eight states, summed by hand.
        let b = kauffman_bracket(&trefoil()).unwrap();
        assert_eq!(bracket_span(&b), Some(12));
        assert_eq!(determinant(&trefoil()).unwrap(), 3);
        assert_eq!(determinant(&figure_eight()).unwrap(), 5);
    }

    #[test]
    fn bareiss_small() {
        assert_eq!(integer_determinant(&[vec![2, 1], vec![1, 2]]), 3);
        assert_eq!(integer_determinant(&[vec![0, 1], vec![1, 0]]), -1);
        assert_eq!(integer_determinant(&[vec![0, 0], vec![1, 0]]), 0);
        assert_eq!(integer_determinant(&[vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]]), 4);
    }

    #[test]
    fn mirror_law() {
        for pd in [trefoil(), figure_eight()] {
            let v = jones(&pd).unwrap();
            assert_eq!(jones(&pd.mirror().unwrap()).unwrap(), v.invert_variable());
        }
    }

    #[test]
    fn determinant_matches_jones_at_minus_one() {
        for pd in [trefoil(), figure_eight()] {
            let v = jones(&pd).unwrap();
            assert_eq!(jones_at_minus_one(&v).unwrap().unsigned_abs(), determinant(&pd).unwrap());
        }
    }
}
