//! The ROX iterated hash and a strengthened Merkle-Damgard baseline.
//!
//! ROX pads a message `x` with outputs of `RO2(x̄, |x|, j)` up to a multiple
//! of the block size `b`, then chains
//!
//! ```text
//! chain_0 = IV
//! chain_i = H_k(x_i || (chain_{i-1} xor RO1(x̄, k, nu(i))))
//! ```
//!
//! where `x̄` is the first `n` bits of the message and `nu(i)` is the 2-adic
//! valuation of `i`. Oracle inputs are plain concatenations of fixed-width
//! big-endian fields:
//!
//! ```text
//! RO1 input: x̄ (n) || k (n) || nu(i) (w_idx)          -> d bits
//! RO2 input: x̄ (n) || |x| (w_len) || j (w_idx)         -> 2n bits
//! w_idx = bitlen(L), w_len = bitlen(L * b)
//! ```

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::family::{FamilyParams, FunctionFamily};
use crate::rosim::OracleSim;
use crate::seed::Seed;

/// Largest `t` with `2^t | i`.
pub fn nu(i: u64) -> Result<u32> {
    if i == 0 {
        return Err(Error::NuOfZero);
    }
    Ok(i.trailing_zeros())
}

/// Number of bits needed to write `v`, i.e. `ceil(lg(v + 1))`.
pub fn bit_width(v: u64) -> usize {
    (64 - v.leading_zeros()) as usize
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct PaddedMessage {
    pub blocks: Vec<BitString>,
    /// Block count `ceil((|x| + 2n) / b)`.
    pub ell: usize,
    /// RO2 outputs consumed by the padding.
    pub q2: usize,
    pub xbar: BitString,
    pub orig_len: usize,
}

impl PaddedMessage {
    pub fn concat(&self) -> BitString {
        self.blocks.iter().fold(BitString::new(), |acc, b| acc.concat(b))
    }
}

/// One application of the compression function.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct Round {
    /// 1-based round index.
    pub index: usize,
    pub block: BitString,
    pub chain_in: BitString,
    pub mask: BitString,
    /// `block || (chain_in xor mask)`.
    pub comp_input: BitString,
    pub chain_out: BitString,
}

/// Widths and counts that depend only on the parameters, not on oracle state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct RoxLayout {
    pub n: usize,
    pub b: usize,
    pub d: usize,
    pub max_blocks: usize,
    pub idx_width: usize,
    pub len_width: usize,
}

impl RoxLayout {
    pub fn new(params: FamilyParams, max_blocks: usize) -> Result<Self> {
        params.check_rox()?;
        if max_blocks == 0 {
            return Err(Error::InvalidParams("L must be at least 1".into()));
        }
        let b = params.b();
        let n = params.n;
        let idx_width = bit_width(max_blocks as u64);
        let len_width = bit_width((max_blocks * b) as u64);
        let max_q2 = (b + 2 * n - 1).div_ceil(2 * n);
        if bit_width(max_q2 as u64) > idx_width {
            return Err(Error::InvalidParams(format!(
                "L = {max_blocks} too small to index {max_q2} padding outputs"
            )));
        }
        Ok(Self {
            n,
            b,
            d: params.d,
            max_blocks,
            idx_width,
            len_width,
        })
    }

    pub fn ro1_in_bits(&self) -> usize {
        2 * self.n + self.idx_width
    }

    pub fn ro2_in_bits(&self) -> usize {
        self.n + self.len_width + self.idx_width
    }

    /// Shortest valid message length (`n`).
    pub fn min_len(&self) -> usize {
        self.n
    }

    /// Longest valid message length (`L*b - 2n`).
    pub fn max_len(&self) -> usize {
        (self.max_blocks * self.b).saturating_sub(2 * self.n)
    }

    /// `ell(x)` for a message of `len` bits.
    pub fn block_count(&self, len: usize) -> usize {
        (len + 2 * self.n).div_ceil(self.b)
    }

    /// `q2(x)` for a message of `len` bits.
    pub fn padding_calls(&self, len: usize) -> usize {
        let padded = self.block_count(len) * self.b;
        (padded - len).div_ceil(2 * self.n)
    }

    /// Total oracle queries `q(x) = ell(x) + q2(x)` of one evaluation.
    pub fn oracle_cost(&self, len: usize) -> usize {
        self.block_count(len) + self.padding_calls(len)
    }

    pub fn check_len(&self, len: usize) -> Result<()> {
        if len < self.n {
            return Err(Error::MessageTooShort { len, n: self.n });
        }
        let blocks = self.block_count(len);
        if blocks > self.max_blocks {
            return Err(Error::TooManyBlocks {
                blocks,
                max: self.max_blocks,
            });
        }
        Ok(())
    }

    pub fn xbar(&self, x: &BitString) -> Result<BitString> {
        self.check_len(x.len())?;
        x.prefix(self.n)
    }

    pub fn ro1_point(&self, xbar: &BitString, key: &BitString, round: usize) -> Result<BitString> {
        let t = nu(round as u64)?;
        Ok(xbar
            .concat(key)
            .concat(&BitString::from_uint(u64::from(t), self.idx_width)?))
    }

    pub fn ro2_point(&self, xbar: &BitString, len: usize, j: usize) -> Result<BitString> {
        Ok(xbar
            .concat(&BitString::from_uint(len as u64, self.len_width)?)
            .concat(&BitString::from_uint(j as u64, self.idx_width)?))
    }

    /// Padding with RO2 outputs supplied by `ro2`.
    pub fn pad_with<F>(&self, x: &BitString, mut ro2: F) -> Result<PaddedMessage>
    where
        F: FnMut(&BitString) -> Result<BitString>,
    {
        let xbar = self.xbar(x)?;
        let ell = self.block_count(x.len());
        let target = ell * self.b;
        let mut stream = x.clone();
        let mut q2 = 0;
        while stream.len() < target {
            q2 += 1;
            stream.extend(&ro2(&self.ro2_point(&xbar, x.len(), q2)?)?);
        }
        let blocks = stream.prefix(target)?.chunks(self.b)?;
        Ok(PaddedMessage {
            blocks,
            ell,
            q2,
            xbar,
            orig_len: x.len(),
        })
    }

    fn check_chain_inputs(&self, xbar: &BitString, blocks: &[BitString]) -> Result<()> {
        if xbar.len() != self.n {
            return Err(Error::WidthMismatch {
                what: "x̄",
                expected: self.n,
                actual: xbar.len(),
            });
        }
        if blocks.len() > self.max_blocks {
            return Err(Error::TooManyBlocks {
                blocks: blocks.len(),
                max: self.max_blocks,
            });
        }
        if let Some(bad) = blocks.iter().find(|blk| blk.len() != self.b) {
            return Err(Error::WidthMismatch {
                what: "block",
                expected: self.b,
                actual: bad.len(),
            });
        }
        Ok(())
    }
}

/// Chains `blocks` from `iv`, taking the mask of round `i` from `mask(i)`.
pub fn run_rounds<F>(
    family: &FunctionFamily,
    iv: &BitString,
    key: &BitString,
    blocks: &[BitString],
    mut mask: F,
) -> Result<Vec<Round>>
where
    F: FnMut(usize) -> Result<BitString>,
{
    let mut chain = iv.clone();
    let mut rounds = Vec::with_capacity(blocks.len());
    for (idx, block) in blocks.iter().enumerate() {
        let index = idx + 1;
        let mask = mask(index)?;
        let comp_input = block.concat(&chain.xor(&mask)?);
        let chain_out = family.eval(key, &comp_input)?;
        rounds.push(Round {
            index,
            block: block.clone(),
            chain_in: chain,
            mask,
            comp_input,
            chain_out: chain_out.clone(),
        });
        chain = chain_out;
    }
    Ok(rounds)
}

/// A compression family bound to its two oracles. Single-owner mutable
/// state; use [`RoxInstance::fork`] for independent trials.
#[derive(Debug, Clone)]
pub struct RoxInstance {
    family: FunctionFamily,
    layout: RoxLayout,
    iv: BitString,
    pub ro1: OracleSim,
    pub ro2: OracleSim,
}

impl RoxInstance {
    /// Binds `family` to fresh oracles derived from `seed`. `IV = 0^d`.
    pub fn new(family: FunctionFamily, max_blocks: usize, seed: &Seed) -> Result<Self> {
        let layout = RoxLayout::new(family.params(), max_blocks)?;
        let ro1 = OracleSim::new(layout.ro1_in_bits(), layout.d, seed.child("ro1", 0));
        let ro2 = OracleSim::new(layout.ro2_in_bits(), 2 * layout.n, seed.child("ro2", 0));
        Ok(Self {
            iv: BitString::zeros(layout.d),
            family,
            layout,
            ro1,
            ro2,
        })
    }

    /// Same construction with fresh oracles.
    pub fn fork(&self, seed: &Seed) -> Result<Self> {
        Self::new(self.family.clone(), self.layout.max_blocks, seed)
    }

    pub fn family(&self) -> &FunctionFamily {
        &self.family
    }

    pub fn layout(&self) -> &RoxLayout {
        &self.layout
    }

    pub fn params(&self) -> FamilyParams {
        self.family.params()
    }

    pub fn iv(&self) -> &BitString {
        &self.iv
    }

    pub fn pad(&mut self, x: &BitString) -> Result<PaddedMessage> {
        let ro2 = &mut self.ro2;
        self.layout.pad_with(x, |p| ro2.query(p))
    }

    fn rounds(&mut self, key: &BitString, xbar: &BitString, blocks: &[BitString]) -> Result<Vec<Round>> {
        self.family.check_key(key)?;
        self.layout.check_chain_inputs(xbar, blocks)?;
        let layout = self.layout;
        let ro1 = &mut self.ro1;
        run_rounds(&self.family, &self.iv, key, blocks, |i| {
            ro1.query(&layout.ro1_point(xbar, key, i)?)
        })
    }

    /// `ROX'` over a block prefix: `IV` when empty.
    pub fn chain(&mut self, key: &BitString, xbar: &BitString, blocks: &[BitString]) -> Result<BitString> {
        let rounds = self.rounds(key, xbar, blocks)?;
        Ok(rounds
            .last()
            .map(|r| r.chain_out.clone())
            .unwrap_or_else(|| self.iv.clone()))
    }

    /// Every compression call of one evaluation.
    pub fn trace(&mut self, key: &BitString, x: &BitString) -> Result<Vec<Round>> {
        self.family.check_key(key)?;
        let padded = self.pad(x)?;
        self.rounds(key, &padded.xbar, &padded.blocks)
    }

    pub fn eval(&mut self, key: &BitString, x: &BitString) -> Result<BitString> {
        let trace = self.trace(key, x)?;
        Ok(trace.last().expect("ell >= 1").chain_out.clone())
    }

    /// Total queries made to both oracles so far.
    pub fn oracle_queries(&self) -> u64 {
        self.ro1.stats().queries + self.ro2.stats().queries
    }
}

/// Plain chaining `H_k(x_i || chain_{i-1})` from `iv` over
/// `x || 1 || 0* || bin(|x|, len_width)`, padded to a multiple of `b`.
pub fn md_strengthened_eval(
    family: &FunctionFamily,
    key: &BitString,
    iv: &BitString,
    x: &BitString,
    len_width: usize,
) -> Result<BitString> {
    let p = family.params();
    if p.b() == 0 {
        return Err(Error::InvalidParams("block size must be positive".into()));
    }
    family.check_digest(iv)?;
    if len_width < 64 && (x.len() as u64) >> len_width != 0 {
        return Err(Error::Overlong {
            len: x.len(),
            width: len_width,
        });
    }
    let b = p.b();
    let mut padded = x.clone();
    padded.push(true);
    let zeros = (b - (padded.len() + len_width) % b) % b;
    padded.extend(&BitString::zeros(zeros));
    padded.extend(&BitString::from_uint(x.len() as u64, len_width)?);
    let mut chain = iv.clone();
    for block in padded.chunks(b)? {
        chain = family.eval(key, &block.concat(&chain))?;
    }
    Ok(chain)
}

/// ROX over `base` as an ordinary family on `msg_bits`-bit messages. Oracles
/// are re-derived from `seed` on every evaluation, so evaluation is pure;
/// [`FunctionFamily::for_trial`] swaps in a per-trial oracle seed.
pub fn rox_family(base: &FunctionFamily, max_blocks: usize, msg_bits: usize, seed: &Seed) -> Result<FunctionFamily> {
    let probe = RoxInstance::new(base.clone(), max_blocks, seed)?;
    probe.layout().check_len(msg_bits)?;
    let p = base.params();
    let params = FamilyParams::expanding(p.n, msg_bits, p.d)?;
    let label = format!("rox:{}", base.label());
    let inner = base.clone();
    let oracle_seed = seed.clone();
    let fam = FunctionFamily::from_fn(label.clone(), params, move |k, x| {
        let mut inst = RoxInstance::new(inner.clone(), max_blocks, &oracle_seed).expect("validated");
        inst.eval(k, x).expect("validated widths")
    });
    let base = base.clone();
    Ok(fam.with_reseed(move |trial| {
        rox_family(&base, max_blocks, msg_bits, &trial.child("rox-oracles", 0)).expect("validated")
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;
    use crate::family::{constant_family, tabulated_family};
    use crate::seed::random_bits;

    fn toy() -> RoxInstance {
        let p = FamilyParams::new(4, 12, 8).unwrap();
        let f = tabulated_family(&Seed::from_u64(1), p).unwrap();
        RoxInstance::new(f, 16, &Seed::from_u64(2)).unwrap()
    }

    #[test]
    fn nu_examples() {
        assert_eq!(nu(1).unwrap(), 0);
        assert_eq!(nu(4).unwrap(), 2);
        assert_eq!(nu(6).unwrap(), 1);
        assert_eq!(nu(12).unwrap(), 2);
        assert_eq!(nu(0), Err(Error::NuOfZero));
    }

    #[test]
    fn nu_dyadic_schedule() {
        for t in 0..10u32 {
            let hits: Vec<u64> = (1..=1u64 << t).filter(|&i| nu(i).unwrap() == t).collect();
            assert_eq!(hits, vec![1u64 << t]);
        }
    }

    #[test]
    fn widths_at_toy_params() {
        let inst = toy();
        assert_eq!(inst.layout().idx_width, 5);
        assert_eq!(inst.layout().len_width, 7);
        assert_eq!(inst.ro1.in_bits(), 13);
        assert_eq!(inst.ro2.in_bits(), 16);
        assert_eq!(inst.ro2.out_bits(), 8);
    }

    #[test]
    fn rejects_bad_params() {
        let f = tabulated_family(&Seed::from_u64(1), FamilyParams::new(4, 13, 8).unwrap()).unwrap();
        assert!(RoxInstance::new(f, 16, &Seed::from_u64(0)).is_err());
        let f = tabulated_family(&Seed::from_u64(1), FamilyParams::new(4, 12, 8).unwrap()).unwrap();
        assert!(RoxInstance::new(f, 0, &Seed::from_u64(0)).is_err());
    }

    #[test]
    fn pad_examples() {
        let mut inst = toy();
        let p = inst.pad(&bits("1010")).unwrap();
        assert_eq!((p.ell, p.q2), (3, 1));
        assert_eq!(p.concat().len(), 12);
        assert_eq!(p.concat().prefix(4).unwrap(), bits("1010"));
        assert_eq!(p.xbar, bits("1010"));

        let x = BitString::zeros(13);
        assert_eq!(inst.pad(&x).unwrap().ell, 6);
    }

    #[test]
    fn pad_errors() {
        let mut inst = toy();
        assert!(matches!(
            inst.pad(&bits("101")),
            Err(Error::MessageTooShort { len: 3, n: 4 })
        ));
        // L*b - 2n = 56 is the longest valid message
        assert!(inst.pad(&BitString::zeros(56)).is_ok());
        assert!(matches!(
            inst.pad(&BitString::zeros(57)),
            Err(Error::TooManyBlocks { blocks: 17, max: 16 })
        ));
    }

    #[test]
    fn chain_of_empty_prefix_is_iv() {
        let mut inst = toy();
        let iv = inst.iv().clone();
        assert_eq!(inst.chain(&bits("0110"), &bits("1010"), &[]).unwrap(), iv);
    }

    #[test]
    fn one_block_unrolls() {
        let mut inst = toy();
        let k = bits("0110");
        let xbar = bits("1010");
        let x1 = bits("1100");
        let got = inst.chain(&k, &xbar, std::slice::from_ref(&x1)).unwrap();
        let mask = inst.ro1.peek(&inst.layout().ro1_point(&xbar, &k, 1).unwrap()).unwrap();
        let want = inst
            .family()
            .eval(&k, &x1.concat(&BitString::zeros(8).xor(&mask).unwrap()))
            .unwrap();
        assert_eq!(got, want);
    }

    #[test]
    fn chain_rejects_bad_blocks() {
        let mut inst = toy();
        assert!(inst.chain(&bits("0110"), &bits("1010"), &[bits("110")]).is_err());
        let too_many = vec![bits("0000"); 17];
        assert!(inst.chain(&bits("0110"), &bits("1010"), &too_many).is_err());
    }

    #[test]
    fn trace_is_consistent() {
        let mut inst = toy();
        let mut rng = Seed::from_u64(5).rng();
        for len in [4, 9, 13, 30, 56] {
            let k = random_bits(&mut rng, 4);
            let x = random_bits(&mut rng, len);
            let trace = inst.trace(&k, &x).unwrap();
            assert_eq!(trace.len(), inst.layout().block_count(len));
            assert_eq!(trace.last().unwrap().chain_out, inst.eval(&k, &x).unwrap());
            for r in &trace {
                assert_eq!(inst.family().eval(&k, &r.comp_input).unwrap(), r.chain_out);
                assert_eq!(r.comp_input, r.block.concat(&r.chain_in.xor(&r.mask).unwrap()));
            }
        }
    }

    #[test]
    fn cold_eval_query_count() {
        let mut rng = Seed::from_u64(6).rng();
        for len in 4..=56 {
            let mut inst = toy();
            let k = random_bits(&mut rng, 4);
            let x = random_bits(&mut rng, len);
            inst.eval(&k, &x).unwrap();
            let q = inst.ro1.stats().queries + inst.ro2.stats().queries;
            assert_eq!(q as usize, inst.layout().oracle_cost(len));
            assert_eq!(inst.ro2.stats().queries as usize, inst.layout().padding_calls(len));
        }
    }

    #[test]
    fn key_and_xbar_separate_mask_points() {
        let mut a = toy();
        let mut b = toy();
        let x = BitString::zeros(20);
        a.eval(&bits("0001"), &x).unwrap();
        b.eval(&bits("0010"), &x).unwrap();
        let pa: std::collections::BTreeSet<_> = a.ro1.queried_points().into_iter().collect();
        let pb: std::collections::BTreeSet<_> = b.ro1.queried_points().into_iter().collect();
        assert!(pa.is_disjoint(&pb));

        let mut c = toy();
        c.eval(&bits("0001"), &BitString::ones(20)).unwrap();
        let pc: std::collections::BTreeSet<_> = c.ro1.queried_points().into_iter().collect();
        assert!(pa.is_disjoint(&pc));
    }

    #[test]
    fn md_baseline() {
        let p = FamilyParams::new(4, 12, 8).unwrap();
        let f = tabulated_family(&Seed::from_u64(1), p).unwrap();
        let k = bits("0110");
        let iv = BitString::zeros(8);
        // x || 1 || bin(1, 2) fills exactly one 4-bit block
        let x = bits("1");
        let one_block = bits("1101");
        assert_eq!(
            md_strengthened_eval(&f, &k, &iv, &x, 2).unwrap(),
            f.eval(&k, &one_block.concat(&iv)).unwrap()
        );
        let x = BitString::zeros(10);
        assert_eq!(
            md_strengthened_eval(&f, &k, &iv, &x, 7).unwrap(),
            md_strengthened_eval(&f, &k, &iv, &x, 7).unwrap()
        );
        assert!(md_strengthened_eval(&f, &k, &iv, &BitString::zeros(4), 2).is_err());
    }

    #[test]
    fn rox_family_matches_instance() {
        let p = FamilyParams::new(4, 12, 8).unwrap();
        let base = tabulated_family(&Seed::from_u64(1), p).unwrap();
        let fam = rox_family(&base, 16, 16, &Seed::from_u64(2)).unwrap();
        let mut inst = toy();
        let k = bits("1001");
        let x = BitString::from_uint(0xbeef, 16).unwrap();
        assert_eq!(fam.eval(&k, &x).unwrap(), inst.eval(&k, &x).unwrap());
        assert!(rox_family(&base, 16, 3, &Seed::from_u64(2)).is_err());

        let c = constant_family(p, BitString::ones(8)).unwrap();
        let fam = rox_family(&c, 16, 16, &Seed::from_u64(2)).unwrap();
        assert_eq!(fam.eval(&k, &x).unwrap(), BitString::ones(8));
    }
}
