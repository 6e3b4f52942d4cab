//! Exact-length bit strings.
//!
//! Bits are stored most-significant-bit first. Lengths need not be a
//! multiple of eight, so `trunc`-style operations on odd widths stay exact.
//!
//! The text form is `<decimal bitlen>:<hex>`, where the hex digits carry the
//! bits MSB-first and the final nibble is padded with zero bits. `4:a` is
//! `1010`, `0:` is the empty string.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct BitString {
    bits: Vec<bool>,
}

impl BitString {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn zeros(len: usize) -> Self {
        Self { bits: vec![false; len] }
    }

    pub fn ones(len: usize) -> Self {
        Self { bits: vec![true; len] }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    /// Big-endian fixed-width encoding of `value`. Rejects values that do not
    /// fit in `width` bits.
    pub fn from_uint(value: u64, width: usize) -> Result<Self> {
        if width < 64 && value >> width != 0 {
            return Err(Error::InvalidArgument(format!("{value} does not fit in {width} bits")));
        }
        let bits = (0..width)
            .map(|i| {
                let shift = width - 1 - i;
                shift < 64 && (value >> shift) & 1 == 1
            })
            .collect();
        Ok(Self { bits })
    }

    /// Reads the string as a big-endian unsigned integer.
    pub fn to_uint(&self) -> Result<u64> {
        if self.bits.len() > 64 {
            return Err(Error::InvalidArgument(format!(
                "{} bits do not fit in a u64",
                self.bits.len()
            )));
        }
        Ok(self.bits.iter().fold(0u64, |acc, &b| (acc << 1) | u64::from(b)))
    }

    /// Unpacks `len` bits from `bytes`, MSB-first.
    pub fn from_bytes(bytes: &[u8], len: usize) -> Result<Self> {
        if len > bytes.len() * 8 {
            return Err(Error::OutOfRange {
                start: 0,
                end: len,
                len: bytes.len() * 8,
            });
        }
        let bits = (0..len).map(|i| (bytes[i / 8] >> (7 - i % 8)) & 1 == 1).collect();
        Ok(Self { bits })
    }

    /// Packs the bits MSB-first, zero-padding the last byte.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = vec![0u8; self.bits.len().div_ceil(8)];
        for (i, &b) in self.bits.iter().enumerate() {
            if b {
                out[i / 8] |= 0x80 >> (i % 8);
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bit(&self, index: usize) -> Option<bool> {
        self.bits.get(index).copied()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|b| !b)
    }

    pub fn concat(&self, other: &BitString) -> BitString {
        let mut bits = Vec::with_capacity(self.len() + other.len());
        bits.extend_from_slice(&self.bits);
        bits.extend_from_slice(&other.bits);
        Self { bits }
    }

    pub fn push(&mut self, bit: bool) {
        self.bits.push(bit);
    }

    pub fn extend(&mut self, other: &BitString) {
        self.bits.extend_from_slice(&other.bits);
    }

    pub fn slice(&self, range: Range<usize>) -> Result<BitString> {
        if range.start > range.end || range.end > self.len() {
            return Err(Error::OutOfRange {
                start: range.start,
                end: range.end,
                len: self.len(),
            });
        }
        Ok(Self {
            bits: self.bits[range].to_vec(),
        })
    }

    /// First `len` bits.
    pub fn prefix(&self, len: usize) -> Result<BitString> {
        self.slice(0..len)
    }

    pub fn xor(&self, other: &BitString) -> Result<BitString> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        Ok(Self {
            bits: self.bits.iter().zip(&other.bits).map(|(a, b)| a ^ b).collect(),
        })
    }

    /// Copy with bit `index` inverted.
    pub fn flip(&self, index: usize) -> Result<BitString> {
        if index >= self.len() {
            return Err(Error::OutOfRange {
                start: index,
                end: index + 1,
                len: self.len(),
            });
        }
        let mut out = self.clone();
        out.bits[index] = !out.bits[index];
        Ok(out)
    }

    /// Splits into consecutive chunks of `width` bits. The length must be a
    /// multiple of `width`.
    pub fn chunks(&self, width: usize) -> Result<Vec<BitString>> {
        if width == 0 || !self.len().is_multiple_of(width) {
            return Err(Error::InvalidArgument(format!(
                "{} bits do not split into {width}-bit chunks",
                self.len()
            )));
        }
        Ok(self.bits.chunks(width).map(|c| Self { bits: c.to_vec() }).collect())
    }

    /// Hex digits only, without the length prefix.
    pub fn hex_digits(&self) -> String {
        self.bits
            .chunks(4)
            .map(|nib| {
                let v = nib
                    .iter()
                    .enumerate()
                    .fold(0u32, |acc, (i, &b)| acc | (u32::from(b) << (3 - i)));
                char::from_digit(v, 16).expect("nibble")
            })
            .collect()
    }

    pub fn to_hex(&self) -> String {
        format!("{}:{}", self.len(), self.hex_digits())
    }

    pub fn from_hex(text: &str) -> Result<Self> {
        let (len, hex) = text
            .trim()
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("`{text}`: expected <bitlen>:<hex>")))?;
        let len: usize = len
            .parse()
            .map_err(|_| Error::Parse(format!("`{text}`: bad bit length")))?;
        if hex.len() != len.div_ceil(4) {
            return Err(Error::Parse(format!(
                "`{text}`: {len} bits need {} hex digits, got {}",
                len.div_ceil(4),
                hex.len()
            )));
        }
        let mut bits = Vec::with_capacity(hex.len() * 4);
        for c in hex.chars() {
            let v = c
                .to_digit(16)
                .ok_or_else(|| Error::Parse(format!("`{text}`: bad hex digit `{c}`")))?;
            bits.extend((0..4).map(|i| (v >> (3 - i)) & 1 == 1));
        }
        if bits[len..].iter().any(|&b| b) {
            return Err(Error::Parse(format!("`{text}`: nonzero padding bits")));
        }
        bits.truncate(len);
        Ok(Self { bits })
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString(")?;
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        write!(f, ")")
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::from_hex(s)
    }
}

impl serde::Serialize for BitString {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

/// Parses a literal of `0`/`1` characters. Test and demo helper.
pub fn bits(text: &str) -> BitString {
    BitString::from_bits(
        text.chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '0' => false,
                '1' => true,
                other => panic!("not a bit: {other}"),
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn xor_truth_table() {
        assert_eq!(bits("1010").xor(&bits("0000")).unwrap(), bits("1010"));
        assert_eq!(bits("1010").xor(&bits("1010")).unwrap(), bits("0000"));
        assert_eq!(bits("1100").xor(&bits("1010")).unwrap(), bits("0110"));
    }

    #[test]
    fn xor_rejects_length_mismatch() {
        let err = bits("101").xor(&bits("10")).unwrap_err();
        assert_eq!(err, Error::LengthMismatch { left: 3, right: 2 });
    }

    #[test]
    fn hex_examples() {
        assert_eq!(bits("1010").to_hex(), "4:a");
        assert_eq!(BitString::new().to_hex(), "0:");
        assert_eq!(bits("1").to_hex(), "1:8");
        assert_eq!(bits("101010101").to_hex(), "9:aa8");
        assert_eq!("4:a".parse::<BitString>().unwrap(), bits("1010"));
        assert_eq!("0:".parse::<BitString>().unwrap(), BitString::new());
    }

    #[test]
    fn hex_rejects_malformed() {
        assert!("4".parse::<BitString>().is_err());
        assert!("4:ab".parse::<BitString>().is_err());
        assert!("3:f".parse::<BitString>().is_err());
        assert!("4:g".parse::<BitString>().is_err());
        assert!("x:a".parse::<BitString>().is_err());
    }

    #[test]
    fn slice_is_never_clamped() {
        let s = bits("110");
        assert_eq!(s.slice(1..3).unwrap(), bits("10"));
        assert!(s.slice(1..4).is_err());
        assert!(s.prefix(4).is_err());
        assert_eq!(s.prefix(0).unwrap(), BitString::new());
    }

    #[test]
    fn uint_round_trip() {
        assert_eq!(BitString::from_uint(5, 4).unwrap(), bits("0101"));
        assert_eq!(bits("0101").to_uint().unwrap(), 5);
        assert!(BitString::from_uint(16, 4).is_err());
        assert_eq!(BitString::from_uint(0, 0).unwrap(), BitString::new());
    }

    #[test]
    fn chunks_and_flip() {
        let s = bits("10100011");
        assert_eq!(s.chunks(4).unwrap(), vec![bits("1010"), bits("0011")]);
        assert!(s.chunks(3).is_err());
        assert_eq!(s.flip(7).unwrap(), bits("10100010"));
        assert!(s.flip(8).is_err());
    }

    fn arb_bits(max: usize) -> impl Strategy<Value = BitString> {
        prop::collection::vec(any::<bool>(), 0..=max).prop_map(BitString::from_bits)
    }

    proptest! {
        #[test]
        fn hex_round_trip(s in arb_bits(257)) {
            prop_assert_eq!(BitString::from_hex(&s.to_hex()).unwrap(), s);
        }

        #[test]
        fn bytes_round_trip(s in arb_bits(100)) {
            prop_assert_eq!(BitString::from_bytes(&s.to_bytes(), s.len()).unwrap(), s);
        }

        #[test]
        fn concat_length_and_xor_involution(a in arb_bits(64), b in arb_bits(64)) {
            prop_assert_eq!(a.concat(&b).len(), a.len() + b.len());
            let mask = BitString::from_bits(b.bits().iter().cycle().take(a.len()).copied().collect());
            if a.len() == mask.len() {
                prop_assert_eq!(a.xor(&mask).unwrap().xor(&mask).unwrap(), a);
            }
        }
    }
}
