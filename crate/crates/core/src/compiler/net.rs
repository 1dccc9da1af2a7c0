use std::io::{Read, Write};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use super::vptree::{pdist, GrowingIndex, VpTree};
use super::{format_letters, parse_letters, GatePair, GateSequence, Letter};
use crate::json::FormatError;
use crate::numeric::{haar_unitary, CMat4, UnitaryMatrix};

pub const NET_FORMAT_VERSION: u64 = 1;
pub const DEFAULT_MEMORY_BUDGET: u64 = 8 << 30;
const BINARY_MAGIC: &[u8; 6] = b"UGNET1";
/// Entries closer than this are treated as the same element even with `dedup_radius = 0`.
const DUPLICATE_FLOOR: f64 = 1e-9;
/// Rough resident cost of one entry: matrix, node, mirror link, index share, candidate slack.
const BYTES_PER_ENTRY: u64 = 256 + 8 + 4 + 48 + 256;
const ROOT: u32 = u32::MAX;

/// Reads `UGATE_MEMORY_BUDGET` (bytes, optional `K`/`M`/`G` suffix), falling back to 8 GiB.
pub fn memory_budget_from_env() -> u64 {
    std::env::var("UGATE_MEMORY_BUDGET")
        .ok()
        .and_then(|s| parse_bytes(&s))
        .unwrap_or(DEFAULT_MEMORY_BUDGET)
}

/// Parses a byte count with an optional `K`/`M`/`G` suffix.
pub fn parse_bytes(s: &str) -> Option<u64> {
    let s = s.trim();
    let (digits, shift) = match s.chars().last()?.to_ascii_uppercase() {
        'K' => (&s[..s.len() - 1], 10),
        'M' => (&s[..s.len() - 1], 20),
        'G' => (&s[..s.len() - 1], 30),
        _ => (s, 0),
    };
    digits.trim().parse::<u64>().ok()?.checked_mul(1 << shift)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetOptions {
    pub max_len: usize,
    pub dedup_radius: f64,
    pub memory_budget: u64,
    /// Haar targets used for the covering-radius estimate.
    pub radius_samples: usize,
    pub radius_seed: u64,
}

impl NetOptions {
    pub fn new(max_len: usize, dedup_radius: f64) -> Self {
        Self {
            max_len,
            dedup_radius,
            memory_budget: memory_budget_from_env(),
            radius_samples: 256,
            radius_seed: 0,
        }
    }
}

/// Worst and mean nearest-entry distance over sampled Haar targets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadiusEstimate {
    pub samples: usize,
    pub seed: u64,
    pub worst: f64,
    pub mean: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Node {
    parent: u32,
    letter: u8,
    len: u16,
}

/// Breadth-first epsilon-net of words over `{G, G', G^-1, G'^-1}`.
///
/// Mirror-closed: the swap mirror of every entry is also an entry, except for
/// entries lying within the dedup radius of their own mirror.
pub struct Net {
    pair: GatePair,
    options: NetOptions,
    nodes: Vec<Node>,
    unitaries: Vec<CMat4>,
    tree: VpTree,
    radius: RadiusEstimate,
    complete: bool,
}

#[derive(Debug, Error)]
pub enum NetError {
    #[error("memory budget of {budget} bytes reached after {} entries", partial.len())]
    MemoryBudgetExceeded { budget: u64, partial: Box<Net> },
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl std::fmt::Debug for Net {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Net")
            .field("entries", &self.nodes.len())
            .field("max_len", &self.options.max_len)
            .field("dedup_radius", &self.options.dedup_radius)
            .field("radius", &self.radius)
            .field("complete", &self.complete)
            .finish()
    }
}

pub fn build_net(pair: &GatePair, max_len: usize, dedup_radius: f64) -> Result<Net, NetError> {
    build_net_with(pair, &NetOptions::new(max_len, dedup_radius))
}

/// Enumerates reduced words by length, keeping a word and its mirror only if
/// both are farther than `dedup_radius` from every kept entry. Extensions are
/// only explored from kept words.
pub fn build_net_with(pair: &GatePair, options: &NetOptions) -> Result<Net, NetError> {
    let r = options.dedup_radius.max(DUPLICATE_FLOOR);
    let gens: [CMat4; 4] = Letter::ALL.map(|l| *pair.letter(l).matrix());
    let max_entries = (options.memory_budget / BYTES_PER_ENTRY).max(1) as usize;

    let mut nodes = vec![Node {
        parent: ROOT,
        letter: 0,
        len: 0,
    }];
    let mut unitaries = vec![CMat4::identity()];
    let mut mirror = vec![0u32];
    let mut index = GrowingIndex::default();
    index.insert(&unitaries, 0);
    let mut frontier: Vec<u32> = vec![0];
    let mut complete = true;

    'levels: for _ in 0..options.max_len {
        // Canonical representatives: the root, or words starting with G or G^-1.
        let jobs: Vec<(u32, Letter)> = frontier
            .iter()
            .filter(|&&w| {
                w == 0
                    || first_letter(&nodes, w)
                        .is_some_and(|l| matches!(l, Letter::G | Letter::GInv))
            })
            .flat_map(|&w| {
                let last = (w != 0)
                    .then(|| Letter::from_u8(nodes[w as usize].letter).expect("stored letter"));
                Letter::ALL
                    .into_iter()
                    .filter(move |l| w != 0 || matches!(l, Letter::G | Letter::GInv))
                    .filter(move |l| last.is_none_or(|p| p.inverse() != *l))
                    .map(move |l| (w, l))
            })
            .collect();
        let products: Vec<(CMat4, CMat4)> = jobs
            .par_iter()
            .map(|&(w, l)| {
                let m = mirror[w as usize] as usize;
                (
                    unitaries[w as usize] * gens[l as usize],
                    unitaries[m] * gens[l.mirror() as usize],
                )
            })
            .collect();
        let mut next = Vec::new();
        for (&(w, l), (u, um)) in jobs.iter().zip(products) {
            if index.any_within(&unitaries, &u, r) {
                continue;
            }
            // A word within the radius of its own mirror stands for both.
            let self_mirror = pdist(&u, &um) <= r;
            if !self_mirror && index.any_within(&unitaries, &um, r) {
                continue;
            }
            let added = if self_mirror { 1 } else { 2 };
            if unitaries.len() + added > max_entries {
                complete = false;
                break 'levels;
            }
            let len = nodes[w as usize].len + 1;
            let a = unitaries.len() as u32;
            nodes.push(Node {
                parent: w,
                letter: l as u8,
                len,
            });
            unitaries.push(u);
            index.insert(&unitaries, a);
            next.push(a);
            if self_mirror {
                mirror.push(a);
                continue;
            }
            nodes.push(Node {
                parent: mirror[w as usize],
                letter: l.mirror() as u8,
                len,
            });
            unitaries.push(um);
            mirror.push(a + 1);
            mirror.push(a);
            index.insert(&unitaries, a + 1);
            next.push(a + 1);
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    drop(index);

    let tree = VpTree::build(&unitaries, (0..unitaries.len() as u32).collect());
    let mut net = Net {
        pair: pair.clone(),
        options: options.clone(),
        nodes,
        unitaries,
        tree,
        radius: RadiusEstimate {
            samples: 0,
            seed: options.radius_seed,
            worst: f64::NAN,
            mean: f64::NAN,
        },
        complete,
    };
    net.radius = net.estimate_radius(options.radius_samples, options.radius_seed);
    if complete {
        Ok(net)
    } else {
        Err(NetError::MemoryBudgetExceeded {
            budget: options.memory_budget,
            partial: Box::new(net),
        })
    }
}

fn first_letter(nodes: &[Node], mut i: u32) -> Option<Letter> {
    let mut letter = None;
    while i != 0 && i != ROOT {
        let n = nodes[i as usize];
        letter = Letter::from_u8(n.letter);
        i = n.parent;
    }
    letter
}

impl Net {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn pair(&self) -> &GatePair {
        &self.pair
    }

    pub fn options(&self) -> &NetOptions {
        &self.options
    }

    pub fn max_len(&self) -> usize {
        self.options.max_len
    }

    pub fn dedup_radius(&self) -> f64 {
        self.options.dedup_radius
    }

    pub fn radius(&self) -> &RadiusEstimate {
        &self.radius
    }

    /// False when construction stopped at the memory budget.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn letters(&self, i: usize) -> Vec<Letter> {
        let mut out = Vec::with_capacity(self.nodes[i].len as usize);
        let mut j = i as u32;
        while j != 0 {
            let n = self.nodes[j as usize];
            out.push(Letter::from_u8(n.letter).expect("stored letter"));
            j = n.parent;
        }
        out.reverse();
        out
    }

    pub fn entry(&self, i: usize) -> GateSequence {
        GateSequence::from_parts(
            self.letters(i),
            UnitaryMatrix::from_trusted(self.unitaries[i]),
        )
    }

    pub fn entries(&self) -> impl Iterator<Item = GateSequence> + '_ {
        (0..self.len()).map(|i| self.entry(i))
    }

    pub fn unitary(&self, i: usize) -> &CMat4 {
        &self.unitaries[i]
    }

    /// Index of the nearest entry under `(distance, length, letters)` ordering.
    pub fn nearest(&self, target: &UnitaryMatrix) -> (usize, f64) {
        let (_, best) = self
            .tree
            .nearest(&self.unitaries, target.matrix())
            .expect("net has the identity");
        let mut ties = Vec::new();
        self.tree
            .within(&self.unitaries, target.matrix(), best + 1e-12, &mut ties);
        let (id, d) = ties
            .into_iter()
            .map(|(id, d)| (id as usize, d))
            .min_by(|a, b| {
                a.1.total_cmp(&b.1)
                    .then(self.nodes[a.0].len.cmp(&self.nodes[b.0].len))
                    .then_with(|| self.letters(a.0).cmp(&self.letters(b.0)))
            })
            .expect("nearest entry is within its own distance");
        (id, d)
    }

    pub fn estimate_radius(&self, samples: usize, seed: u64) -> RadiusEstimate {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let targets: Vec<UnitaryMatrix> = (0..samples).map(|_| haar_unitary(&mut rng)).collect();
        let dists: Vec<f64> = targets.par_iter().map(|t| self.nearest(t).1).collect();
        RadiusEstimate {
            samples,
            seed,
            worst: dists.iter().copied().fold(0.0, f64::max),
            mean: if samples == 0 {
                0.0
            } else {
                dists.iter().sum::<f64>() / samples as f64
            },
        }
    }

    /// SHA-256 over the gate bits, build parameters and word structure.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        for z in self.pair.g().matrix().iter() {
            h.update(z.re.to_le_bytes());
            h.update(z.im.to_le_bytes());
        }
        h.update((self.options.max_len as u64).to_le_bytes());
        h.update(self.options.dedup_radius.to_le_bytes());
        for n in &self.nodes {
            h.update(n.parent.to_le_bytes());
            h.update([n.letter]);
        }
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }

    fn header(&self) -> NetHeader {
        NetHeader {
            format_version: NET_FORMAT_VERSION,
            pair: self.pair.clone(),
            max_len: self.options.max_len,
            dedup_radius: self.options.dedup_radius,
            memory_budget: self.options.memory_budget,
            radius: self.radius.clone(),
            complete: self.complete,
            entries: self.nodes.len(),
            fingerprint: self.fingerprint(),
        }
    }

    pub fn to_json(&self) -> Result<String, FormatError> {
        let doc = NetDocument {
            header: self.header(),
            words: (0..self.len())
                .map(|i| format_letters(&self.letters(i)))
                .collect(),
        };
        crate::json::to_canonical_string(&doc)
    }

    pub fn from_json(text: &str) -> Result<Self, FormatError> {
        let doc: NetDocument =
            serde_json::from_str(text).map_err(|e| FormatError::Document(e.to_string()))?;
        check_version(doc.header.format_version)?;
        let mut words = Vec::with_capacity(doc.words.len());
        for w in &doc.words {
            words.push(parse_letters(w).map_err(|e| FormatError::Document(e.to_string()))?);
        }
        Self::assemble(doc.header, &words)
    }

    /// `UGNET1`, a little-endian `u32` header length, the JSON header, then one
    /// `(parent: u32, letter: u8)` record per non-root entry.
    pub fn write_binary<W: Write>(&self, mut out: W) -> Result<(), NetError> {
        let header =
            serde_json::to_vec(&self.header()).map_err(|e| FormatError::Document(e.to_string()))?;
        out.write_all(BINARY_MAGIC)?;
        out.write_all(&(header.len() as u32).to_le_bytes())?;
        out.write_all(&header)?;
        for n in &self.nodes[1..] {
            out.write_all(&n.parent.to_le_bytes())?;
            out.write_all(&[n.letter])?;
        }
        Ok(())
    }

    pub fn read_binary<R: Read>(mut input: R) -> Result<Self, NetError> {
        let mut magic = [0u8; 6];
        input.read_exact(&mut magic)?;
        if &magic != BINARY_MAGIC {
            return Err(FormatError::Document("missing UGNET1 magic".into()).into());
        }
        let mut len = [0u8; 4];
        input.read_exact(&mut len)?;
        let mut header = vec![0u8; u32::from_le_bytes(len) as usize];
        input.read_exact(&mut header)?;
        let header: NetHeader =
            serde_json::from_slice(&header).map_err(|e| FormatError::Document(e.to_string()))?;
        check_version(header.format_version)?;
        let mut parents = Vec::with_capacity(header.entries.saturating_sub(1));
        let mut rec = [0u8; 5];
        for _ in 1..header.entries {
            input.read_exact(&mut rec)?;
            let parent = u32::from_le_bytes([rec[0], rec[1], rec[2], rec[3]]);
            let letter = Letter::from_u8(rec[4])
                .ok_or_else(|| FormatError::Document("bad letter byte".into()))?;
            parents.push((parent, letter));
        }
        Ok(Self::from_records(header, &parents)?)
    }

    fn assemble(header: NetHeader, words: &[Vec<Letter>]) -> Result<Self, FormatError> {
        let bad = |m: &str| FormatError::Document(m.to_string());
        if words.first().is_none_or(|w| !w.is_empty()) {
            return Err(bad("first net entry must be the empty word"));
        }
        let mut by_word = std::collections::HashMap::new();
        by_word.insert(Vec::new(), 0u32);
        let mut records = Vec::with_capacity(words.len());
        for (i, w) in words.iter().enumerate().skip(1) {
            let (last, prefix) = w
                .split_last()
                .ok_or_else(|| bad("empty word after the root"))?;
            let parent = *by_word
                .get(prefix)
                .ok_or_else(|| bad("word prefix is not an earlier entry"))?;
            records.push((parent, *last));
            by_word.insert(w.clone(), i as u32);
        }
        Self::from_records(header, &records)
    }

    fn from_records(header: NetHeader, records: &[(u32, Letter)]) -> Result<Self, FormatError> {
        let bad = |m: &str| FormatError::Document(m.to_string());
        let gens: [CMat4; 4] = Letter::ALL.map(|l| *header.pair.letter(l).matrix());
        let mut nodes = vec![Node {
            parent: ROOT,
            letter: 0,
            len: 0,
        }];
        let mut unitaries = vec![CMat4::identity()];
        for &(parent, letter) in records {
            if parent as usize >= nodes.len() {
                return Err(bad("parent index out of order"));
            }
            nodes.push(Node {
                parent,
                letter: letter as u8,
                len: nodes[parent as usize].len + 1,
            });
            unitaries.push(unitaries[parent as usize] * gens[letter as usize]);
        }
        let tree = VpTree::build(&unitaries, (0..unitaries.len() as u32).collect());
        let net = Net {
            pair: header.pair,
            options: NetOptions {
                max_len: header.max_len,
                dedup_radius: header.dedup_radius,
                memory_budget: header.memory_budget,
                radius_samples: header.radius.samples,
                radius_seed: header.radius.seed,
            },
            nodes,
            unitaries,
            tree,
            radius: header.radius,
            complete: header.complete,
        };
        if net.fingerprint() != header.fingerprint {
            return Err(bad("fingerprint mismatch"));
        }
        Ok(net)
    }
}

fn check_version(found: u64) -> Result<(), FormatError> {
    if found != NET_FORMAT_VERSION {
        return Err(FormatError::Version {
            found,
            expected: NET_FORMAT_VERSION,
        });
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct NetHeader {
    format_version: u64,
    pair: GatePair,
    max_len: usize,
    dedup_radius: f64,
    memory_budget: u64,
    radius: RadiusEstimate,
    complete: bool,
    entries: usize,
    fingerprint: String,
}

#[derive(Serialize, Deserialize)]
struct NetDocument {
    header: NetHeader,
    words: Vec<String>,
}

/// Zeroth-level approximation: the nearest net entry.
pub fn base_approx(target: &UnitaryMatrix, net: &Net) -> GateSequence {
    net.entry(net.nearest(target).0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compiler::evaluate_letters;
    use crate::compiler::tests::regression_pair;
    use crate::numeric::{c, projective_distance, FloatAlgebraElement};

    #[test]
    fn length_one_net() {
        let pair = regression_pair(0.7);
        let net = build_net(&pair, 1, 0.0).unwrap();
        assert_eq!(net.len(), 5);
        let words: Vec<String> = net.entries().map(|e| e.to_string()).collect();
        assert_eq!(words, ["", "G", "G'", "G⁻¹", "G'⁻¹"]);
    }

    #[test]
    fn finite_group_saturates() {
        let w = std::f64::consts::TAU / 3.0;
        let g = FloatAlgebraElement::new(CMat4::from_diagonal(&nalgebra::Vector4::new(
            c(0.0, w),
            c(0.0, -w),
            c(0.0, 0.0),
            c(0.0, 0.0),
        )))
        .unwrap();
        let pair = GatePair::new(g.exp());
        let net = build_net(&pair, 12, 0.0).unwrap();
        assert_eq!(net.len(), 9);
        assert!(net.is_complete());
    }

    #[test]
    fn entries_are_exact_products_and_separated() {
        let pair = regression_pair(0.7);
        let net = build_net(&pair, 5, 0.15).unwrap();
        for (i, e) in net.entries().enumerate() {
            let fresh = evaluate_letters(&pair, e.letters());
            assert!(
                projective_distance(&fresh, e.evaluated()) < 1e-12,
                "entry {i}"
            );
        }
        for i in 0..net.len() {
            for j in 0..i {
                assert!(pdist(net.unitary(i), net.unitary(j)) > 0.15);
            }
        }
    }

    #[test]
    fn base_approx_examples() {
        let pair = regression_pair(0.7);
        let net = build_net(&pair, 4, 0.05).unwrap();
        let id = base_approx(&UnitaryMatrix::identity(), &net);
        assert!(id.is_empty());
        let g = base_approx(pair.g(), &net);
        assert_eq!(g.letters(), &[Letter::G]);
        for i in [7, 20, net.len() - 1] {
            let e = net.entry(i);
            let m = base_approx(&e.evaluated().swap_conjugate(), &net);
            assert_eq!(m.letters(), e.mirror().letters());
        }
    }

    #[test]
    fn budget_stops_with_partial_net() {
        let pair = regression_pair(0.7);
        let mut opts = NetOptions::new(6, 0.0);
        opts.memory_budget = 40 * BYTES_PER_ENTRY;
        match build_net_with(&pair, &opts) {
            Err(NetError::MemoryBudgetExceeded { partial, .. }) => {
                assert!(!partial.is_complete());
                assert!(partial.len() <= 40 && partial.len() > 5);
                assert!(partial.radius().worst.is_finite());
            }
            other => panic!("expected budget failure, got {other:?}"),
        }
    }

    #[test]
    fn persistence_round_trips() {
        let pair = regression_pair(0.7);
        let net = build_net(&pair, 4, 0.1).unwrap();
        let text = net.to_json().unwrap();
        let back = Net::from_json(&text).unwrap();
        assert_eq!(back.fingerprint(), net.fingerprint());
        assert_eq!(back.to_json().unwrap(), text);
        let mut bytes = Vec::new();
        net.write_binary(&mut bytes).unwrap();
        assert_eq!(&bytes[..6], b"UGNET1");
        let back = Net::read_binary(bytes.as_slice()).unwrap();
        assert_eq!(back.fingerprint(), net.fingerprint());
        assert_eq!(back.len(), net.len());
    }

    #[test]
    fn parses_budget_strings() {
        assert_eq!(parse_bytes("1024"), Some(1024));
        assert_eq!(parse_bytes("2K"), Some(2048));
        assert_eq!(parse_bytes("8G"), Some(8 << 30));
        assert_eq!(parse_bytes("x"), None);
    }
}
