//! Free-group words over indexed generators.
//!
//! Words are stored as explicit, freely reduced letter sequences. The
//! commutator convention is `[a, b] = a⁻¹ b⁻¹ a b`.

use std::fmt::Write as _;

use serde::Serialize;

/// Position of a generator in its presentation's generator list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GeneratorId(pub usize);

impl GeneratorId {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: GeneratorId,
    pub inverse: bool,
}

impl Letter {
    pub fn new(gen: usize, inverse: bool) -> Self {
        Letter { gen: GeneratorId(gen), inverse }
    }

    pub fn pos(gen: usize) -> Self {
        Letter::new(gen, false)
    }

    pub fn neg(gen: usize) -> Self {
        Letter::new(gen, true)
    }

    pub fn inv(self) -> Self {
        Letter { gen: self.gen, inverse: !self.inverse }
    }

    pub fn sign(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    fn cancels(self, other: Letter) -> bool {
        self.gen == other.gen && self.inverse != other.inverse
    }
}

/// A freely reduced word. The empty word is the identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<Letter>,
}

/// Freely reduce a raw letter sequence.
pub fn reduce<I: IntoIterator<Item = Letter>>(raw: I) -> Word {
    let mut letters: Vec<Letter> = Vec::new();
    for l in raw {
        match letters.last() {
            Some(&last) if last.cancels(l) => {
                letters.pop();
            }
            _ => letters.push(l),
        }
    }
    Word { letters }
}

/// `[a, b] = a⁻¹ b⁻¹ a b`, reduced.
pub fn commutator(a: &Word, b: &Word) -> Word {
    reduce(
        a.inverse()
            .letters
            .into_iter()
            .chain(b.inverse().letters)
            .chain(a.letters.iter().copied())
            .chain(b.letters.iter().copied()),
    )
}

/// The ordered product of the generators in `subset`; empty for the empty set.
pub fn w_e(subset: &[GeneratorId]) -> Word {
    debug_assert!(subset.windows(2).all(|w| w[0] < w[1]), "w_E needs a strictly increasing set");
    Word { letters: subset.iter().map(|g| Letter { gen: *g, inverse: false }).collect() }
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    pub fn generator(gen: usize) -> Self {
        Word { letters: vec![Letter::pos(gen)] }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word { letters: self.letters.iter().rev().map(|l| l.inv()).collect() }
    }

    pub fn mul(&self, other: &Word) -> Word {
        reduce(self.letters.iter().chain(other.letters.iter()).copied())
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..k.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// `g · self · g⁻¹`.
    pub fn conjugate_by(&self, g: &Word) -> Word {
        g.mul(self).mul(&g.inverse())
    }

    /// Strip matching letters from both ends so the word is cyclically reduced.
    pub fn cyclically_reduced(&self) -> Word {
        let mut lo = 0;
        let mut hi = self.letters.len();
        while hi - lo >= 2 && self.letters[lo].cancels(self.letters[hi - 1]) {
            lo += 1;
            hi -= 1;
        }
        Word { letters: self.letters[lo..hi].to_vec() }
    }

    /// Largest generator index used, if any.
    pub fn max_generator(&self) -> Option<usize> {
        self.letters.iter().map(|l| l.gen.0).max()
    }

    /// Signed occurrence count of every generator.
    pub fn exponent_sums(&self, gen_count: usize) -> Vec<i64> {
        let mut sums = vec![0i64; gen_count];
        for l in &self.letters {
            sums[l.gen.0] += l.sign();
        }
        sums
    }

    /// Exponent sums reduced into `0..p`.
    pub fn exponent_vector(&self, gen_count: usize, p: u32) -> Vec<u32> {
        self.exponent_sums(gen_count)
            .into_iter()
            .map(|s| s.rem_euclid(p as i64) as u32)
            .collect()
    }

    /// Membership in `[F,F]F^p`: every exponent sum vanishes mod `p`.
    pub fn in_gamma2(&self, p: u32) -> bool {
        let n = self.max_generator().map_or(0, |m| m + 1);
        self.exponent_vector(n, p).iter().all(|&e| e == 0)
    }

    /// Syllable notation such as `a^2*b^-1`; the identity prints as `1`.
    pub fn format(&self, names: &[String]) -> String {
        if self.letters.is_empty() {
            return "1".to_string();
        }
        let mut out = String::new();
        let mut i = 0;
        while i < self.letters.len() {
            let l = self.letters[i];
            let mut j = i;
            while j < self.letters.len() && self.letters[j] == l {
                j += 1;
            }
            let run = (j - i) as i64 * l.sign();
            if !out.is_empty() {
                out.push('*');
            }
            out.push_str(&names[l.gen.0]);
            if run != 1 {
                let _ = write!(out, "^{run}");
            }
            i = j;
        }
        out
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        reduce(iter)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const A: usize = 0;
    const B: usize = 1;

    fn raw(spec: &[(usize, i8)]) -> Vec<Letter> {
        spec.iter().map(|&(g, s)| Letter::new(g, s < 0)).collect()
    }

    #[test]
    fn cancellation() {
        assert!(reduce(raw(&[(A, 1), (A, -1)])).is_identity());
        let w = reduce(raw(&[(A, 1), (B, 1), (B, -1), (A, 1)]));
        assert_eq!(w.letters(), &raw(&[(A, 1), (A, 1)])[..]);
    }

    #[test]
    fn worked_relator_is_reduced() {
        // x3^-1 x3^-1 x1^-1 x3 x1 with x1 = 0, x3 = 2
        let letters = raw(&[(2, -1), (2, -1), (0, -1), (2, 1), (0, 1)]);
        assert_eq!(reduce(letters.clone()).letters(), &letters[..]);
    }

    #[test]
    fn commutator_convention() {
        let a = Word::generator(A);
        assert!(commutator(&a, &a).is_identity());
        let x1 = Word::generator(0);
        let x3 = Word::generator(2);
        assert_eq!(commutator(&x3, &x1).letters(), &raw(&[(2, -1), (0, -1), (2, 1), (0, 1)])[..]);
    }

    #[test]
    fn exponent_vectors() {
        let w = reduce(raw(&[(0, 1), (0, 1), (2, 1), (2, 1)]));
        assert_eq!(w.exponent_vector(3, 2), vec![0, 0, 0]);
        assert!(w.in_gamma2(2));
        assert_eq!(Word::identity().exponent_vector(4, 5), vec![0; 4]);
        let w = reduce(raw(&[(A, 1), (A, 1), (B, 1)]));
        assert_eq!(w.exponent_vector(2, 3), vec![2, 1]);
        assert!(!Word::generator(0).in_gamma2(2));
    }

    #[test]
    fn ordered_words() {
        assert!(w_e(&[]).is_identity());
        assert_eq!(w_e(&[GeneratorId(0), GeneratorId(1)]).letters(), &raw(&[(0, 1), (1, 1)])[..]);
        assert_eq!(w_e(&[GeneratorId(1)]), Word::generator(1));
    }

    #[test]
    fn formatting() {
        let names: Vec<String> = ["a", "b"].iter().map(|s| s.to_string()).collect();
        let w = reduce(raw(&[(A, 1), (A, 1), (B, -1)]));
        assert_eq!(w.format(&names), "a^2*b^-1");
        assert_eq!(Word::identity().format(&names), "1");
    }

    #[test]
    fn cyclic_reduction() {
        let w = reduce(raw(&[(A, 1), (B, 1), (A, -1)]));
        assert_eq!(w.cyclically_reduced(), Word::generator(B));
    }

    fn arb_word(gens: usize, max_len: usize) -> impl Strategy<Value = Word> {
        prop::collection::vec((0..gens, any::<bool>()), 0..max_len)
            .prop_map(|v| reduce(v.into_iter().map(|(g, i)| Letter::new(g, i))))
    }

    proptest! {
        #[test]
        fn reduce_idempotent_and_shrinking(v in prop::collection::vec((0usize..3, any::<bool>()), 0..40)) {
            let letters: Vec<Letter> = v.into_iter().map(|(g, i)| Letter::new(g, i)).collect();
            let once = reduce(letters.clone());
            prop_assert!(once.len() <= letters.len());
            prop_assert_eq!(reduce(once.letters().iter().copied()), once);
        }

        #[test]
        fn exponent_vector_is_homomorphism(u in arb_word(3, 20), v in arb_word(3, 20), p in prop::sample::select(vec![2u32, 3, 5])) {
            let eu = u.exponent_vector(3, p);
            let ev = v.exponent_vector(3, p);
            let euv = u.mul(&v).exponent_vector(3, p);
            for i in 0..3 {
                prop_assert_eq!(euv[i], (eu[i] + ev[i]) % p);
            }
            let einv = u.inverse().exponent_vector(3, p);
            for i in 0..3 {
                prop_assert_eq!(einv[i], (p - eu[i]) % p);
            }
        }

        #[test]
        fn commutator_times_power_in_gamma2(u in arb_word(3, 12), v in arb_word(3, 12), w in arb_word(3, 12), p in prop::sample::select(vec![2u32, 3, 5])) {
            let word = commutator(&u, &v).mul(&w.pow(p as i64));
            prop_assert!(word.in_gamma2(p));
            prop_assert!(commutator(&u, &v).exponent_vector(3, p).iter().all(|&e| e == 0));
        }
    }
}
