use std::collections::HashMap;

/// Bijection between external identifiers and dense indices `0..len`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SymbolTable {
    ids: Vec<String>,
    index: HashMap<String, usize>,
}

impl SymbolTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the new index, or `None` if the id is already present.
    pub fn insert(&mut self, id: &str) -> Option<usize> {
        if self.index.contains_key(id) {
            return None;
        }
        let k = self.ids.len();
        self.ids.push(id.to_string());
        self.index.insert(id.to_string(), k);
        Some(k)
    }

    /// Index of `id`, inserting it if new.
    pub fn intern(&mut self, id: &str) -> usize {
        match self.index.get(id) {
            Some(&k) => k,
            None => self.insert(id).unwrap(),
        }
    }

    pub fn get(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn id(&self, index: usize) -> &str {
        &self.ids[index]
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn bijection(ids in proptest::collection::vec("[A-Z]{1,3}", 0..40)) {
            let mut t = SymbolTable::new();
            for id in &ids {
                t.intern(id);
            }
            for (k, id) in t.ids().iter().enumerate() {
                prop_assert_eq!(t.get(id), Some(k));
                prop_assert_eq!(t.id(k), id.as_str());
            }
            let distinct: std::collections::HashSet<_> = ids.iter().collect();
            prop_assert_eq!(t.len(), distinct.len());
        }
    }

    #[test]
    fn insert_rejects_duplicates() {
        let mut t = SymbolTable::new();
        assert_eq!(t.insert("a"), Some(0));
        assert_eq!(t.insert("a"), None);
        assert_eq!(t.intern("b"), 1);
    }
}
