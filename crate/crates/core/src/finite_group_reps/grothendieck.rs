use std::collections::BTreeMap;
use std::fmt::Debug;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::serre_weights::{SerreWeightGL, SerreWeightSL};
use crate::{BmtError, Result};

/// A weight usable as a basis label of a Grothendieck group.
pub trait WeightKey: Clone + Ord + Debug {
    fn key(&self) -> String;
    fn parse_key(s: &str) -> Result<Self>;
    fn dimension(&self) -> u64;
}

fn parse_list(s: &str) -> Result<Vec<u64>> {
    s.split(',')
        .map(|x| {
            x.trim().parse::<u64>().map_err(|_| BmtError::Parse {
                what: "weight label",
                detail: s.to_string(),
            })
        })
        .collect()
}

impl WeightKey for SerreWeightGL {
    fn key(&self) -> String {
        if self.n() == 2 {
            format!("{},{}", self.a(), self.b())
        } else {
            let w: Vec<String> = self.w().iter().map(u64::to_string).collect();
            format!("{}|{}", w.join(","), self.det())
        }
    }

    fn parse_key(s: &str) -> Result<Self> {
        match s.split_once('|') {
            Some((w, det)) => {
                let det = parse_list(det)?;
                if det.len() != 1 {
                    return Err(BmtError::Parse { what: "weight label", detail: s.into() });
                }
                SerreWeightGL::from_parts(parse_list(w)?, det[0])
            }
            None => match parse_list(s)?.as_slice() {
                &[a, b] => Ok(SerreWeightGL::pair(a, b)),
                _ => Err(BmtError::Parse { what: "weight label", detail: s.into() }),
            },
        }
    }

    fn dimension(&self) -> u64 {
        assert_eq!(self.n(), 2, "dimensions are only tracked for n = 2");
        self.a() + 1
    }
}

impl WeightKey for SerreWeightSL {
    fn key(&self) -> String {
        if self.n() == 2 {
            self.a().to_string()
        } else {
            let w: Vec<String> = self.w().iter().map(u64::to_string).collect();
            w.join(",")
        }
    }

    fn parse_key(s: &str) -> Result<Self> {
        match parse_list(s)?.as_slice() {
            &[a] => Ok(SerreWeightSL::single(a)),
            w => SerreWeightSL::from_parts(w.to_vec()),
        }
    }

    fn dimension(&self) -> u64 {
        assert_eq!(self.n(), 2, "dimensions are only tracked for n = 2");
        self.a() + 1
    }
}

/// Finitely supported integer combination of simple modules.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GrothendieckElt<K: WeightKey> {
    coeffs: BTreeMap<K, i64>,
}

pub type GrothendieckGL = GrothendieckElt<SerreWeightGL>;
pub type GrothendieckSL = GrothendieckElt<SerreWeightSL>;

impl<K: WeightKey> Default for GrothendieckElt<K> {
    fn default() -> Self {
        Self { coeffs: BTreeMap::new() }
    }
}

impl<K: WeightKey> GrothendieckElt<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(k: K) -> Self {
        Self::from_terms([(k, 1)])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (K, i64)>) -> Self {
        let mut out = Self::zero();
        for (k, c) in terms {
            out.add_term(k, c);
        }
        out
    }

    pub fn add_term(&mut self, k: K, c: i64) {
        if c == 0 {
            return;
        }
        let entry = self.coeffs.entry(k.clone()).or_insert(0);
        *entry += c;
        if *entry == 0 {
            self.coeffs.remove(&k);
        }
    }

    pub fn coeff(&self, k: &K) -> i64 {
        self.coeffs.get(k).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> &BTreeMap<K, i64> {
        &self.coeffs
    }

    pub fn support(&self) -> impl Iterator<Item = &K> {
        self.coeffs.keys()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_effective(&self) -> bool {
        self.coeffs.values().all(|&c| c >= 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, &c) in &other.coeffs {
            out.add_term(k.clone(), c);
        }
        out
    }

    pub fn scale(&self, factor: i64) -> Self {
        Self::from_terms(self.coeffs.iter().map(|(k, &c)| (k.clone(), c * factor)))
    }

    pub fn dimension(&self) -> i64 {
        self.coeffs.iter().map(|(k, &c)| c * k.dimension() as i64).sum()
    }

    pub fn map_keys<L: WeightKey>(&self, f: impl Fn(&K) -> L) -> GrothendieckElt<L> {
        GrothendieckElt::from_terms(self.coeffs.iter().map(|(k, &c)| (f(k), c)))
    }
}

impl GrothendieckGL {
    /// Relabels `[Symm^a (x) det^b]` as `[Symm^a]`.
    pub fn restrict_to_sl2(&self) -> GrothendieckSL {
        self.map_keys(|s| s.restrict())
    }
}

impl<K: WeightKey> Serialize for GrothendieckElt<K> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        // Emitted in weight order, not string order.
        let mut m = serializer.serialize_map(Some(self.coeffs.len()))?;
        for (k, c) in &self.coeffs {
            m.serialize_entry(&k.key(), c)?;
        }
        m.end()
    }
}

impl<'de, K: WeightKey> Deserialize<'de> for GrothendieckElt<K> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = BTreeMap::<String, i64>::deserialize(deserializer)?;
        let mut out = Self::zero();
        for (k, c) in raw {
            out.add_term(K::parse_key(&k).map_err(D::Error::custom)?, c);
        }
        Ok(out)
    }
}
