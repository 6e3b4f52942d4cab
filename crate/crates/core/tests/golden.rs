//! Frozen vectors at the default toy parameters (n=4, b=4, d=8, L=16).
//!
//! `reference` recomputes every vector from the written definitions with
//! plain bit vectors and SHA-256, sharing no code with the library. Both it
//! and the library are checked against the frozen files.

use rox_core::bits::BitString;
use rox_core::family::tabulated_family;
use rox_core::registry::{Setup, ToyParams};
use rox_core::toolkit::extract_preimage;

mod reference {
    use sha2::{Digest, Sha256};

    pub type Bits = Vec<u8>;

    pub const N: usize = 4;
    pub const B: usize = 4;
    pub const D: usize = 8;
    pub const L: usize = 16;
    // bitlen(L) and bitlen(L*b)
    pub const W_IDX: usize = 5;
    pub const W_LEN: usize = 7;

    fn sha(parts: &[&[u8]]) -> [u8; 32] {
        let mut h = Sha256::new();
        for p in parts {
            h.update(p);
        }
        h.finalize().into()
    }

    pub fn master(s: u64) -> [u8; 32] {
        sha(&[b"rox-lab/seed/v1", &s.to_be_bytes()])
    }

    pub fn child(v: &[u8; 32], label: &str, idx: u64) -> [u8; 32] {
        sha(&[
            b"rox-lab/derive/v1",
            v,
            &(label.len() as u32).to_be_bytes(),
            label.as_bytes(),
            &idx.to_be_bytes(),
        ])
    }

    fn pack(x: &[u8]) -> Vec<u8> {
        x.chunks(8)
            .map(|c| c.iter().enumerate().fold(0u8, |acc, (i, &bit)| acc | (bit << (7 - i))))
            .collect()
    }

    pub fn expand(v: &[u8; 32], domain: &str, input: &[u8], out: usize) -> Bits {
        let mut bits = Vec::new();
        let mut ctr = 0u32;
        while bits.len() < out {
            let blk = sha(&[
                b"rox-lab/expand/v1",
                v,
                &(domain.len() as u32).to_be_bytes(),
                domain.as_bytes(),
                &(input.len() as u32).to_be_bytes(),
                &pack(input),
                &ctr.to_be_bytes(),
            ]);
            for byte in blk {
                for i in 0..8 {
                    bits.push((byte >> (7 - i)) & 1);
                }
            }
            ctr += 1;
        }
        bits.truncate(out);
        bits
    }

    pub fn uint(v: usize, w: usize) -> Bits {
        (0..w).rev().map(|i| ((v >> i) & 1) as u8).collect()
    }

    fn cat(parts: &[&[u8]]) -> Bits {
        parts.concat()
    }

    fn xor(a: &[u8], b: &[u8]) -> Bits {
        assert_eq!(a.len(), b.len());
        a.iter().zip(b).map(|(x, y)| x ^ y).collect()
    }

    /// Largest t with 2^t dividing i.
    pub fn nu(mut i: usize) -> usize {
        let mut t = 0;
        while i % 2 == 0 {
            i /= 2;
            t += 1;
        }
        t
    }

    pub struct World {
        family: [u8; 32],
        ro1: [u8; 32],
        ro2: [u8; 32],
    }

    impl World {
        pub fn new(s: u64) -> Self {
            let m = master(s);
            let oracles = child(&m, "oracles", 0);
            Self {
                family: child(&m, "family", 0),
                ro1: child(&oracles, "ro1", 0),
                ro2: child(&oracles, "ro2", 0),
            }
        }

        pub fn h(&self, k: &[u8], x: &[u8]) -> Bits {
            expand(&self.family, "family", &cat(&[k, x]), D)
        }

        fn ro1(&self, xbar: &[u8], k: &[u8], i: usize) -> Bits {
            expand(&self.ro1, "oracle", &cat(&[xbar, k, &uint(nu(i), W_IDX)]), D)
        }

        fn ro2(&self, xbar: &[u8], len: usize, j: usize) -> Bits {
            expand(
                &self.ro2,
                "oracle",
                &cat(&[xbar, &uint(len, W_LEN), &uint(j, W_IDX)]),
                2 * N,
            )
        }

        /// Padded message, one entry per block.
        pub fn pad(&self, x: &[u8]) -> Vec<Bits> {
            assert!(x.len() >= N);
            let ell = (x.len() + 2 * N).div_ceil(B);
            assert!(ell <= L);
            let mut s = x.to_vec();
            let mut j = 1;
            while s.len() < ell * B {
                s.extend(self.ro2(&x[..N], x.len(), j));
                j += 1;
            }
            s.truncate(ell * B);
            s.chunks(B).map(<[u8]>::to_vec).collect()
        }

        /// Chain value after `blocks`, masks keyed by `xbar`.
        pub fn chain(&self, k: &[u8], xbar: &[u8], blocks: &[Bits]) -> Bits {
            let mut c = vec![0u8; D];
            for (idx, blk) in blocks.iter().enumerate() {
                let input = cat(&[blk, &xor(&c, &self.ro1(xbar, k, idx + 1))]);
                c = self.h(k, &input);
            }
            c
        }

        pub fn rox(&self, k: &[u8], x: &[u8]) -> Bits {
            self.chain(k, &x[..N], &self.pad(x))
        }

        /// Last compression input of an evaluation.
        pub fn last_input(&self, k: &[u8], x: &[u8]) -> Bits {
            let blocks = self.pad(x);
            let ell = blocks.len();
            let c = self.chain(k, &x[..N], &blocks[..ell - 1]);
            cat(&[&blocks[ell - 1], &xor(&c, &self.ro1(&x[..N], k, ell))])
        }
    }
}

fn bits_of(b: &BitString) -> Vec<u8> {
    b.bits().iter().map(|&v| u8::from(v)).collect()
}

fn string_of(v: &[u8]) -> BitString {
    BitString::from_bits(v.iter().map(|&b| b == 1).collect())
}

struct Vector {
    kind: String,
    seed: u64,
    key: BitString,
    input: BitString,
    expected: BitString,
}

fn load(text: &str, default_kind: &str) -> Vec<Vector> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|line| {
            let (lhs, rhs) = line.split_once("->").expect("arrow");
            let mut f: Vec<&str> = lhs.split_whitespace().collect();
            let kind = if f.len() == 4 {
                f.remove(0).to_owned()
            } else {
                default_kind.to_owned()
            };
            Vector {
                kind,
                seed: f[0].parse().unwrap(),
                key: f[1].parse().unwrap(),
                input: f[2].parse().unwrap(),
                expected: rhs.trim().parse().unwrap(),
            }
        })
        .collect()
}

const DIGESTS: &str = include_str!("data/golden.txt");
const TOOLKIT: &str = include_str!("data/golden_toolkit.txt");

fn reference_value(v: &Vector) -> BitString {
    let w = reference::World::new(v.seed);
    let (k, x) = (bits_of(&v.key), bits_of(&v.input));
    let out = match v.kind.as_str() {
        "rox" => w.rox(&k, &x),
        "pad" => w.pad(&x).concat(),
        "chain2" => w.chain(&k, &x[..reference::N], &w.pad(&x)[..2]),
        "preimage" => w.last_input(&k, &x),
        "h" => w.h(&k, &x),
        other => panic!("unknown vector kind {other}"),
    };
    string_of(&out)
}

fn library_value(v: &Vector) -> BitString {
    let setup = Setup::new(ToyParams::default(), v.seed);
    let family = tabulated_family(&setup.family_seed(), setup.params.family_params().unwrap()).unwrap();
    let mut inst = setup.instance(family.clone()).unwrap();
    match v.kind.as_str() {
        "rox" => inst.eval(&v.key, &v.input).unwrap(),
        "pad" => inst.pad(&v.input).unwrap().concat(),
        "chain2" => {
            let p = inst.pad(&v.input).unwrap();
            inst.chain(&v.key, &p.xbar, &p.blocks[..2]).unwrap()
        }
        "preimage" => extract_preimage(&mut inst, &v.key, &v.input).unwrap(),
        "h" => family.eval(&v.key, &v.input).unwrap(),
        other => panic!("unknown vector kind {other}"),
    }
}

fn all_vectors() -> Vec<Vector> {
    let mut v = load(DIGESTS, "rox");
    v.extend(load(TOOLKIT, "rox"));
    v
}

#[test]
fn reference_reproduces_frozen_vectors() {
    for v in all_vectors() {
        assert_eq!(
            reference_value(&v),
            v.expected,
            "{} {} {} {}",
            v.kind,
            v.seed,
            v.key,
            v.input
        );
    }
}

#[test]
fn library_reproduces_frozen_vectors() {
    for v in all_vectors() {
        assert_eq!(
            library_value(&v),
            v.expected,
            "{} {} {} {}",
            v.kind,
            v.seed,
            v.key,
            v.input
        );
    }
}

#[test]
fn reference_nu_schedule() {
    let expect = [0, 1, 0, 2, 0, 1, 0, 3, 0, 1, 0, 2, 0, 1, 0, 4];
    for (i, &t) in expect.iter().enumerate() {
        assert_eq!(reference::nu(i + 1), t);
        assert_eq!(rox_core::rox::nu(i as u64 + 1).unwrap(), t as u32);
    }
}

#[test]
fn preimage_vectors_use_three_blocks() {
    for v in load(TOOLKIT, "rox").iter().filter(|v| v.kind == "preimage") {
        assert_eq!((v.input.len() + 8).div_ceil(4), 3);
    }
}

#[test]
fn extracted_preimage_hashes_to_digest() {
    for v in load(TOOLKIT, "rox").iter().filter(|v| v.kind == "preimage") {
        let digest = load(DIGESTS, "rox")
            .into_iter()
            .find(|d| d.seed == v.seed && d.key == v.key && d.input == v.input)
            .expect("matching digest vector")
            .expected;
        let w = reference::World::new(v.seed);
        assert_eq!(string_of(&w.h(&bits_of(&v.key), &bits_of(&v.expected))), digest);
    }
}

/// Prints vectors computed by the reference; used once to freeze the files.
#[test]
#[ignore]
fn print_reference_vectors() {
    let cases: [(u64, &str, &str); 6] = [
        (1, "4:0", "4:a"),
        (1, "4:3", "13:1ab8"),
        (2, "4:5", "20:12345"),
        (3, "4:9", "33:1deadbee8"),
        (7, "4:f", "56:0123456789abcd"),
        (42, "4:6", "4:6"),
    ];
    for (s, k, x) in cases {
        let (k, x): (BitString, BitString) = (k.parse().unwrap(), x.parse().unwrap());
        let w = reference::World::new(s);
        let (kb, xb) = (bits_of(&k), bits_of(&x));
        println!("{s} {k} {x} -> {}", string_of(&w.rox(&kb, &xb)));
        println!("pad {s} {k} {x} -> {}", string_of(&w.pad(&xb).concat()));
        println!(
            "chain2 {s} {k} {x} -> {}",
            string_of(&w.chain(&kb, &xb[..4], &w.pad(&xb)[..2]))
        );
        if x.len() == 4 {
            println!("preimage {s} {k} {x} -> {}", string_of(&w.last_input(&kb, &xb)));
        }
    }
}
