use std::collections::HashMap;
use std::hash::Hash;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, RwLock};

/// Bounded least-recently-used memo table.
///
/// Lookups take a shared lock and bump an atomic recency stamp, so readers
/// never block each other; inserts are serialized behind the write lock.
pub struct LruMemo<K, V> {
    map: RwLock<HashMap<K, (Arc<V>, AtomicU64)>>,
    clock: AtomicU64,
    capacity: usize,
}

impl<K: Eq + Hash + Clone, V> LruMemo<K, V> {
    pub fn new(capacity: usize) -> Self {
        Self {
            map: RwLock::new(HashMap::new()),
            clock: AtomicU64::new(0),
            capacity: capacity.max(1),
        }
    }

    pub fn get(&self, key: &K) -> Option<Arc<V>> {
        let map = self.map.read().expect("memo lock poisoned");
        map.get(key).map(|(v, stamp)| {
            stamp.store(self.clock.fetch_add(1, Ordering::Relaxed), Ordering::Relaxed);
            Arc::clone(v)
        })
    }

    pub fn get_or_insert_with(&self, key: K, make: impl FnOnce() -> V) -> Arc<V> {
        if let Some(v) = self.get(&key) {
            return v;
        }
        let value = Arc::new(make());
        let mut map = self.map.write().expect("memo lock poisoned");
        if let Some((v, _)) = map.get(&key) {
            return Arc::clone(v);
        }
        if map.len() >= self.capacity {
            let oldest = map
                .iter()
                .min_by_key(|(_, (_, s))| s.load(Ordering::Relaxed))
                .map(|(k, _)| k.clone());
            if let Some(k) = oldest {
                map.remove(&k);
            }
        }
        let stamp = AtomicU64::new(self.clock.fetch_add(1, Ordering::Relaxed));
        map.insert(key, (Arc::clone(&value), stamp));
        value
    }

    pub fn len(&self) -> usize {
        self.map.read().expect("memo lock poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
