//! Fixed-length bit-string genotypes and Hamming geometry.
//!
//! Position `i` (1-based in the text form) is stored at bit index `i - 1`,
//! packed little-endian into `u64` words. Bits past `n` in the last word are
//! always zero, so word-wise XOR + popcount gives exact distances.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{JumpGaError, Result};

const WORD_BITS: usize = 64;

/// An immutable point of `{0,1}^n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Genotype {
    words: Box<[u64]>,
    n: usize,
    ones: usize,
}

#[inline]
fn word_count(n: usize) -> usize {
    n.div_ceil(WORD_BITS)
}

#[inline]
fn tail_mask(n: usize) -> u64 {
    match n % WORD_BITS {
        0 => u64::MAX,
        r => (1u64 << r) - 1,
    }
}

impl Genotype {
    /// Builds a genotype from packed words. Bits beyond `n` are cleared.
    pub fn from_words(n: usize, mut words: Vec<u64>) -> Result<Self> {
        if n == 0 {
            return Err(JumpGaError::ContractViolation(
                "genotype length must be positive".into(),
            ));
        }
        if words.len() != word_count(n) {
            return Err(JumpGaError::DimensionMismatch {
                expected: word_count(n),
                found: words.len(),
            });
        }
        if let Some(last) = words.last_mut() {
            *last &= tail_mask(n);
        }
        let ones = words.iter().map(|w| w.count_ones() as usize).sum();
        Ok(Self {
            words: words.into_boxed_slice(),
            n,
            ones,
        })
    }

    pub(crate) fn from_words_unchecked(n: usize, mut words: Vec<u64>) -> Self {
        debug_assert_eq!(words.len(), word_count(n));
        if let Some(last) = words.last_mut() {
            *last &= tail_mask(n);
        }
        let ones = words.iter().map(|w| w.count_ones() as usize).sum();
        Self {
            words: words.into_boxed_slice(),
            n,
            ones,
        }
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::from_words(n, vec![0; word_count(n)])
    }

    pub fn ones(n: usize) -> Result<Self> {
        Self::from_words(n, vec![u64::MAX; word_count(n)])
    }

    /// Builds a genotype from a bit slice, position 1 first.
    pub fn from_bits(bits: &[bool]) -> Result<Self> {
        let n = bits.len();
        let mut words = vec![0u64; word_count(n.max(1))];
        for (i, &b) in bits.iter().enumerate() {
            if b {
                words[i / WORD_BITS] |= 1 << (i % WORD_BITS);
            }
        }
        Self::from_words(n, words)
    }

    /// Uniform sample from `{0,1}^n`.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        if n == 0 {
            return Err(JumpGaError::ContractViolation(
                "genotype length must be positive".into(),
            ));
        }
        let words = (0..word_count(n)).map(|_| rng.random::<u64>()).collect();
        Ok(Self::from_words_unchecked(n, words))
    }

    /// Uniform sample among strings with exactly `ones` one-bits.
    pub fn random_with_ones<R: Rng + ?Sized>(n: usize, ones: usize, rng: &mut R) -> Result<Self> {
        if n == 0 || ones > n {
            return Err(JumpGaError::ContractViolation(format!(
                "cannot place {ones} ones in a string of length {n}"
            )));
        }
        let mut words = vec![0u64; word_count(n)];
        for i in rand::seq::index::sample(rng, n, ones) {
            words[i / WORD_BITS] |= 1 << (i % WORD_BITS);
        }
        Ok(Self::from_words_unchecked(n, words))
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    /// `|x|_1`
    #[inline]
    pub fn ones_count(&self) -> usize {
        self.ones
    }

    /// `|x|_0`
    #[inline]
    pub fn zeros_count(&self) -> usize {
        self.n - self.ones
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Bit at 0-based index `i`.
    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(
            i < self.n,
            "bit index {i} out of range for length {}",
            self.n
        );
        self.words[i / WORD_BITS] >> (i % WORD_BITS) & 1 == 1
    }

    pub fn bits(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.n).map(move |i| self.get(i))
    }

    /// Returns a copy with the listed 0-based positions flipped.
    pub fn with_flipped(&self, positions: &[usize]) -> Result<Self> {
        let mut words = self.words.to_vec();
        for &i in positions {
            if i >= self.n {
                return Err(JumpGaError::ContractViolation(format!(
                    "flip position {i} out of range for length {}",
                    self.n
                )));
            }
            words[i / WORD_BITS] ^= 1 << (i % WORD_BITS);
        }
        Ok(Self::from_words_unchecked(self.n, words))
    }

    pub(crate) fn check_same_len(&self, other: &Genotype) -> Result<()> {
        if self.n != other.n {
            return Err(JumpGaError::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }
}

/// Word-wise XOR + popcount; callers must guarantee equal lengths.
#[inline]
pub(crate) fn hamming_unchecked(x: &Genotype, y: &Genotype) -> u32 {
    x.words
        .iter()
        .zip(y.words.iter())
        .map(|(a, b)| (a ^ b).count_ones())
        .sum()
}

/// Hamming distance `H(x, y)`.
pub fn hamming(x: &Genotype, y: &Genotype) -> Result<u32> {
    x.check_same_len(y)?;
    Ok(hamming_unchecked(x, y))
}

impl fmt::Display for Genotype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.bits().map(|b| if b { '1' } else { '0' }).collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for Genotype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Genotype({self})")
    }
}

impl FromStr for Genotype {
    type Err = JumpGaError;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(JumpGaError::Parse(format!(
                    "invalid genotype character {other:?}"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_bits(&bits)
    }
}
