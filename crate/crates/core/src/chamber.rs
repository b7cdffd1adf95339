//! The parameter lattice `sum x_i = 0`, its walls and chambers.
//!
//! A ramification vector is a point of the lattice with all entries
//! nonzero; each proper subset `I` of the ends cuts the wall
//! `sum_{i in I} x_i = 0`.  Chambers are represented by a stored integer
//! sample point, and every sign query evaluates exactly at the sample.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::LinearForm;
use crate::scalar::signum_i8;
use crate::trees::{full_mask, mask_display, mask_to_labels, normalize_split};
use crate::Int;

/// An ordered tuple of `n` nonzero integers summing to zero.  Positive
/// entries are the ramification profile over 0, negative over infinity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RamificationVector {
    x: Vec<Int>,
}

impl RamificationVector {
    pub fn new(x: Vec<Int>) -> Result<Self> {
        let n = x.len();
        if n < 3 || n > 16 {
            return Err(Error::InvalidArgument(format!(
                "ramification vector length {} out of range 3..=16",
                n
            )));
        }
        if !x.iter().fold(Int::zero(), |a, b| a + b).is_zero() {
            return Err(Error::InvalidArgument(
                "ramification vector entries must sum to zero".into(),
            ));
        }
        for (i, v) in x.iter().enumerate() {
            if v.is_zero() {
                return Err(Error::OnWall {
                    wall: format!("W{{{}}}", i + 1),
                });
            }
        }
        Ok(RamificationVector { x })
    }

    pub fn from_i64(x: &[i64]) -> Result<Self> {
        Self::new(x.iter().map(|&v| Int::from(v)).collect())
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn entries(&self) -> &[Int] {
        &self.x
    }

    /// Number of simple branch points, `n - 2`.
    pub fn r(&self) -> usize {
        self.n() - 2
    }

    /// Total degree: the sum of the positive entries.
    pub fn degree(&self) -> Int {
        self.x
            .iter()
            .filter(|v| v.is_positive())
            .fold(Int::zero(), |a, b| a + b)
    }

    /// `|Aut(x+)| * |Aut(x-)|`: product of factorials of entry
    /// multiplicities, positives and negatives separately.
    pub fn aut_factor(&self) -> Int {
        let mut sorted = self.x.clone();
        sorted.sort();
        let mut f = Int::from(1);
        let mut run = 1u64;
        for i in 1..=sorted.len() {
            if i < sorted.len() && sorted[i] == sorted[i - 1] {
                run += 1;
                f *= Int::from(run);
            } else {
                run = 1;
            }
        }
        f
    }
}

/// Canonical wall representative: singletons `{i}` are kept as-is, a
/// larger subset is stored as the side not containing the largest end.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Wall {
    n: usize,
    mask: u32,
}

impl Wall {
    pub fn new(n: usize, raw_mask: u32) -> Result<Self> {
        let c = raw_mask.count_ones() as usize;
        if raw_mask == 0 || c >= n || (raw_mask & !full_mask(n)) != 0 {
            return Err(Error::InvalidArgument(format!(
                "invalid wall subset {} for n={}",
                mask_display(raw_mask),
                n
            )));
        }
        let mask = if c == 1 || c == n - 1 {
            if c == 1 {
                raw_mask
            } else {
                full_mask(n) & !raw_mask
            }
        } else {
            normalize_split(n, raw_mask)
        };
        Ok(Wall { n, mask })
    }

    /// Keep the subset exactly as given; the crossing form and the factor
    /// bookkeeping then follow the caller's orientation.
    pub fn oriented(n: usize, mask: u32) -> Result<Self> {
        let c = mask.count_ones() as usize;
        if mask == 0 || c >= n || (mask & !full_mask(n)) != 0 {
            return Err(Error::InvalidArgument(format!(
                "invalid wall subset {} for n={}",
                mask_display(mask),
                n
            )));
        }
        Ok(Wall { n, mask })
    }

    /// The canonical representative of the same wall.
    pub fn canonical(&self) -> Wall {
        Wall::new(self.n, self.mask).expect("valid wall")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mask(&self) -> u32 {
        self.mask
    }

    pub fn size(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn labels(&self) -> Vec<usize> {
        mask_to_labels(self.mask)
    }

    /// The linear form `sum_{i in I} x_i` in normal form.
    pub fn form(&self) -> LinearForm<Int> {
        LinearForm::subset_sum(self.n, self.mask)
    }

    pub fn display(&self) -> String {
        format!("W{}", mask_display(self.mask))
    }
}

/// One canonical representative per wall: `n` singletons plus the subsets
/// of size 2..=n-2 modulo complementation; sorted by (size, mask).
pub fn walls(n: usize) -> Vec<Wall> {
    let mut out: Vec<Wall> = (0..n).map(|i| Wall { n, mask: 1 << i }).collect();
    let mut bigger: Vec<Wall> = (0u32..(1 << (n - 1)))
        .filter(|m| {
            let c = m.count_ones() as usize;
            c >= 2 && c <= n - 2
        })
        .map(|mask| Wall { n, mask })
        .collect();
    bigger.sort_by_key(|w| (w.size(), w.mask));
    out.extend(bigger);
    out
}

/// A chamber of the wall arrangement, represented by an interior sample.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chamber {
    sample: RamificationVector,
}

impl Chamber {
    pub fn sample(&self) -> &RamificationVector {
        &self.sample
    }

    pub fn n(&self) -> usize {
        self.sample.n()
    }

    pub fn x(&self) -> &[Int] {
        self.sample.entries()
    }

    pub fn wall_sign(&self, w: &Wall) -> i8 {
        signum_i8(&w.form().eval(self.x()))
    }

    pub fn sign_vector(&self) -> Vec<i8> {
        walls(self.n()).iter().map(|w| self.wall_sign(w)).collect()
    }

    pub fn contains(&self, x: &RamificationVector) -> bool {
        x.n() == self.n()
            && walls(self.n())
                .iter()
                .all(|w| signum_i8(&w.form().eval(x.entries())) == self.wall_sign(w))
    }
}

/// Validate that `x` lies off every wall and record its chamber; the first
/// violated wall (in canonical order) is named otherwise.
pub fn chamber_of(x: &RamificationVector) -> Result<Chamber> {
    for w in walls(x.n()) {
        if w.form().eval(x.entries()).is_zero() {
            return Err(Error::OnWall { wall: w.display() });
        }
    }
    Ok(Chamber { sample: x.clone() })
}

/// Check that two chambers are adjacent across `wall` only: every other
/// wall sign agrees.  Returns the list of disagreements on failure.
pub fn check_adjacent(plus: &Chamber, minus: &Chamber, wall: &Wall) -> Result<()> {
    if plus.n() != minus.n() || plus.n() != wall.n() {
        return Err(Error::InvalidArgument("mismatched end counts".into()));
    }
    let canonical = wall.canonical();
    let mut disagreements = Vec::new();
    for w in walls(plus.n()) {
        if w == canonical {
            // the crossing form follows the caller's orientation
            let sp = signum_i8(&wall.form().eval(plus.x()));
            let sm = signum_i8(&wall.form().eval(minus.x()));
            if !(sp > 0 && sm < 0) {
                disagreements.push(format!("{} (must flip + to -)", wall.display()));
            }
        } else if plus.wall_sign(&w) != minus.wall_sign(&w) {
            disagreements.push(w.display());
        }
    }
    if disagreements.is_empty() {
        Ok(())
    } else {
        Err(Error::NotAdjacent {
            wall: wall.display(),
            disagreements,
        })
    }
}

fn lcg_next(state: &mut u64) -> u64 {
    *state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    *state >> 33
}

/// Construct a pair of integer samples in chambers adjacent across `wall`:
/// the first has `sum_I x > 0`, the second `< 0`, and every other wall
/// sign agrees.  Deterministic for a given wall.
pub fn adjacent_sample_pair(wall: &Wall) -> Result<(RamificationVector, RamificationVector)> {
    let n = wall.n();
    let mask = wall.mask();
    let in_i: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
    let out_i: Vec<usize> = (0..n).filter(|i| mask & (1 << i) == 0).collect();
    let mut state: u64 = 0x9e37_79b9 ^ ((n as u64) << 32) ^ mask as u64;
    let all_walls = walls(n);
    for attempt in 0..10_000u64 {
        let range = 4 + (attempt / 100) as i64;
        let mut z = vec![0i64; n];
        // Generic point on the wall: both the subset sum and the total are zero.
        for &i in in_i.iter().skip(1) {
            z[i] = (lcg_next(&mut state) % (2 * range as u64 + 1)) as i64 - range;
        }
        z[in_i[0]] = -in_i.iter().skip(1).map(|&i| z[i]).sum::<i64>();
        for &i in out_i.iter().skip(1) {
            z[i] = (lcg_next(&mut state) % (2 * range as u64 + 1)) as i64 - range;
        }
        z[out_i[0]] = -out_i.iter().skip(1).map(|&i| z[i]).sum::<i64>();
        // Genericity: every other wall must be off.
        let generic = all_walls.iter().all(|w| {
            if w == wall {
                return true;
            }
            let s: i64 = w.labels().iter().map(|&i| z[i]).sum();
            s != 0
        });
        if !generic {
            continue;
        }
        // Perturb across the wall.
        let p = in_i[0];
        let q = out_i[0];
        let make = |dir: i64| -> Vec<i64> {
            let mut x: Vec<i64> = z.iter().map(|&v| 2 * v).collect();
            x[p] += dir;
            x[q] -= dir;
            x
        };
        let xp = RamificationVector::from_i64(&make(1))?;
        let xm = RamificationVector::from_i64(&make(-1))?;
        let cp = chamber_of(&xp)?;
        let cm = chamber_of(&xm)?;
        check_adjacent(&cp, &cm, wall)?;
        return Ok((xp, xm));
    }
    Err(Error::Degenerate(format!(
        "no adjacent sample pair found for {}",
        wall.display()
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wall_count_n4() {
        assert_eq!(walls(4).len(), 7);
        assert_eq!(walls(5).len(), 15);
    }

    #[test]
    fn sign_queries() {
        let x = RamificationVector::from_i64(&[3, 1, -2, -2]).unwrap();
        let c = chamber_of(&x).unwrap();
        let w13 = Wall::new(4, 0b0101).unwrap();
        let w23 = Wall::new(4, 0b0110).unwrap();
        assert_eq!(c.wall_sign(&w13), 1);
        assert_eq!(c.wall_sign(&w23), -1);
    }

    #[test]
    fn on_wall_named() {
        let x = RamificationVector::from_i64(&[1, 1, -1, -1]).unwrap();
        match chamber_of(&x) {
            Err(Error::OnWall { wall }) => assert_eq!(wall, "W{1,3}"),
            other => panic!("expected on-wall error, got {:?}", other),
        }
        assert!(matches!(
            RamificationVector::from_i64(&[1, 0, -1]),
            Err(Error::OnWall { .. })
        ));
    }

    #[test]
    fn wall_canonicalization() {
        // {1,4,5} for n=5 contains the largest end; canonical is {2,3}.
        let w = Wall::new(5, 0b11001).unwrap();
        assert_eq!(w.mask(), 0b00110);
        assert_eq!(w.display(), "W{2,3}");
        // complement of a singleton is the singleton
        let w2 = Wall::new(4, 0b1110).unwrap();
        assert_eq!(w2.mask(), 0b0001);
    }

    #[test]
    fn adjacent_pairs_exist_for_all_walls() {
        for n in 4..=6 {
            for w in walls(n) {
                let (xp, xm) = adjacent_sample_pair(&w).unwrap();
                let cp = chamber_of(&xp).unwrap();
                let cm = chamber_of(&xm).unwrap();
                check_adjacent(&cp, &cm, &w).unwrap();
            }
        }
    }

    #[test]
    fn aut_factor() {
        let x = RamificationVector::from_i64(&[3, 1, -2, -2]).unwrap();
        assert_eq!(x.aut_factor(), Int::from(2));
        let y = RamificationVector::from_i64(&[2, 2, -1, -3]).unwrap();
        assert_eq!(y.aut_factor(), Int::from(2));
        let z = RamificationVector::from_i64(&[1, 2, -3]).unwrap();
        assert_eq!(z.aut_factor(), Int::from(1));
        let w = RamificationVector::from_i64(&[2, 2, -2, -2]).unwrap();
        assert_eq!(w.aut_factor(), Int::from(4));
    }

    #[test]
    fn degree_and_r() {
        let x = RamificationVector::from_i64(&[3, 1, -2, -2]).unwrap();
        assert_eq!(x.degree(), Int::from(4));
        assert_eq!(x.r(), 2);
    }
}
