//! Finite groups by multiplication table.
//!
//! Orders are capped (default 512) so that exhaustive validation of the
//! group laws stays cheap.

use std::collections::BTreeMap;

use crate::error::{KgtError, Result};

/// Index of a group element within its table.
pub type Gel = u16;

pub const DEFAULT_MAX_GROUP: usize = 512;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    names: Vec<String>,
    name_idx: BTreeMap<String, Gel>,
    mul_table: Vec<Vec<Gel>>,
    inv_table: Vec<Gel>,
    identity: Gel,
}

impl FiniteGroup {
    /// Validate a multiplication table: closure, identity, inverses and
    /// associativity are all checked exhaustively.
    pub fn from_table(names: Vec<String>, table: Vec<Vec<Gel>>) -> Result<FiniteGroup> {
        Self::from_table_with_cap(names, table, DEFAULT_MAX_GROUP)
    }

    pub fn from_table_with_cap(
        names: Vec<String>,
        table: Vec<Vec<Gel>>,
        cap: usize,
    ) -> Result<FiniteGroup> {
        let n = names.len();
        if n == 0 {
            return Err(KgtError::GroupInvalid("no elements".into()));
        }
        if n > cap {
            return Err(KgtError::GroupTooLarge(n, cap));
        }
        let mut name_idx = BTreeMap::new();
        for (i, name) in names.iter().enumerate() {
            if name_idx.insert(name.clone(), i as Gel).is_some() {
                return Err(KgtError::GroupInvalid(format!(
                    "duplicate element name `{name}`"
                )));
            }
        }
        if table.len() != n || table.iter().any(|row| row.len() != n) {
            return Err(KgtError::GroupInvalid(format!("table is not {n} x {n}")));
        }
        if table.iter().flatten().any(|&x| x as usize >= n) {
            return Err(KgtError::GroupInvalid("table entry out of range".into()));
        }
        let identity = (0..n as Gel)
            .find(|&e| {
                (0..n as Gel).all(|x| {
                    table[e as usize][x as usize] == x && table[x as usize][e as usize] == x
                })
            })
            .ok_or_else(|| KgtError::GroupInvalid("no identity element".into()))?;
        let mut inv_table = vec![0 as Gel; n];
        for x in 0..n {
            let inv = (0..n).find(|&y| table[x][y] == identity && table[y][x] == identity);
            match inv {
                Some(y) => inv_table[x] = y as Gel,
                None => {
                    return Err(KgtError::GroupInvalid(format!(
                        "element `{}` has no inverse",
                        names[x]
                    )))
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let ab_c = table[table[a][b] as usize][c];
                    let a_bc = table[a][table[b][c] as usize];
                    if ab_c != a_bc {
                        return Err(KgtError::GroupInvalid(format!(
                            "associativity fails at ({}, {}, {})",
                            names[a], names[b], names[c]
                        )));
                    }
                }
            }
        }
        Ok(FiniteGroup {
            names,
            name_idx,
            mul_table: table,
            inv_table,
            identity,
        })
    }

    /// The cyclic group Z/m with elements named "0", ..., "m-1".
    pub fn cyclic(m: usize) -> FiniteGroup {
        assert!(m >= 1, "cyclic group needs order >= 1");
        let names = (0..m).map(|i| i.to_string()).collect();
        let table = (0..m)
            .map(|i| (0..m).map(|j| ((i + j) % m) as Gel).collect())
            .collect();
        FiniteGroup::from_table(names, table).expect("cyclic table is a group")
    }

    /// The symmetric group on `n` letters; elements are named by their image
    /// words, e.g. "102" for the transposition swapping 0 and 1 in S_3.
    pub fn symmetric(n: usize) -> FiniteGroup {
        assert!(
            (1..=5).contains(&n),
            "supported range for symmetric groups is 1..=5"
        );
        let mut perms: Vec<Vec<usize>> = Vec::new();
        let mut cur: Vec<usize> = (0..n).collect();
        loop {
            perms.push(cur.clone());
            // next lexicographic permutation
            let Some(i) = (0..n.saturating_sub(1))
                .rev()
                .find(|&i| cur[i] < cur[i + 1])
            else {
                break;
            };
            let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
            cur.swap(i, j);
            cur[i + 1..].reverse();
        }
        let index_of = |p: &Vec<usize>| perms.iter().position(|q| q == p).unwrap() as Gel;
        let names: Vec<String> = perms
            .iter()
            .map(|p| p.iter().map(|d| d.to_string()).collect::<String>())
            .collect();
        let table: Vec<Vec<Gel>> = perms
            .iter()
            .map(|p| {
                perms
                    .iter()
                    .map(|q| {
                        // composition acts on points as p after q
                        let pq: Vec<usize> = (0..n).map(|x| p[q[x]]).collect();
                        index_of(&pq)
                    })
                    .collect()
            })
            .collect();
        FiniteGroup::from_table(names, table).expect("permutation table is a group")
    }

    pub fn trivial() -> FiniteGroup {
        FiniteGroup::cyclic(1)
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn identity(&self) -> Gel {
        self.identity
    }

    pub fn mul(&self, a: Gel, b: Gel) -> Gel {
        self.mul_table[a as usize][b as usize]
    }

    pub fn inv(&self, a: Gel) -> Gel {
        self.inv_table[a as usize]
    }

    pub fn name(&self, a: Gel) -> &str {
        &self.names[a as usize]
    }

    pub fn element(&self, name: &str) -> Option<Gel> {
        self.name_idx.get(name).copied()
    }

    pub fn elements(&self) -> impl Iterator<Item = Gel> {
        0..self.order() as Gel
    }
}

/// Check that `map` (indexed by elements of `dom`) is a homomorphism into
/// `cod`; surjectivity is reported separately by the caller.
pub fn check_homomorphism(dom: &FiniteGroup, cod: &FiniteGroup, map: &[Gel]) -> Result<()> {
    if map.len() != dom.order() {
        return Err(KgtError::NotAHomomorphism(format!(
            "map defined on {} of {} elements",
            map.len(),
            dom.order()
        )));
    }
    if map.iter().any(|&x| (x as usize) >= cod.order()) {
        return Err(KgtError::NotAHomomorphism(
            "image element out of range".into(),
        ));
    }
    for a in dom.elements() {
        for b in dom.elements() {
            let lhs = map[dom.mul(a, b) as usize];
            let rhs = cod.mul(map[a as usize], map[b as usize]);
            if lhs != rhs {
                return Err(KgtError::NotAHomomorphism(format!(
                    "map({} * {}) != map({}) * map({})",
                    dom.name(a),
                    dom.name(b),
                    dom.name(a),
                    dom.name(b)
                )));
            }
        }
    }
    Ok(())
}

pub fn is_surjective(cod: &FiniteGroup, map: &[Gel]) -> bool {
    let mut hit = vec![false; cod.order()];
    for &x in map {
        hit[x as usize] = true;
    }
    hit.into_iter().all(|h| h)
}
