use std::collections::HashMap;

use crate::fsm::{ClassId, SymbolNames, TagId};

use super::HmmError;

/// An ambiguity class: the tags a word form can bear, in ascending
/// [`TagId`] order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AmbiguityClass {
    pub name: String,
    pub tags: Vec<TagId>,
}

/// Tag and class inventories with name lookup.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Inventory {
    tags: Vec<String>,
    tag_index: HashMap<String, TagId>,
    classes: Vec<AmbiguityClass>,
    class_index: HashMap<String, ClassId>,
}

/// Conventional class name: the member tags in brackets, e.g. `[ADJ,NOUN]`.
pub fn class_name_for(tag_names: &[&str]) -> String {
    format!("[{}]", tag_names.join(","))
}

impl Inventory {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_tag(&mut self, name: &str) -> Result<TagId, HmmError> {
        if name.is_empty() || name.contains(char::is_whitespace) {
            return Err(HmmError::Invalid(format!("bad tag name {name:?}")));
        }
        if self.tag_index.contains_key(name) {
            return Err(HmmError::Invalid(format!("duplicate tag {name}")));
        }
        let id = TagId(self.tags.len() as u32);
        self.tags.push(name.to_string());
        self.tag_index.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn add_class(&mut self, name: &str, tags: &[TagId]) -> Result<ClassId, HmmError> {
        if name.is_empty() || name.contains(char::is_whitespace) || name.contains('|') {
            return Err(HmmError::Invalid(format!("bad class name {name:?}")));
        }
        if self.class_index.contains_key(name) {
            return Err(HmmError::Invalid(format!("duplicate class {name}")));
        }
        if tags.is_empty() {
            return Err(HmmError::Invalid(format!("class {name} has no tags")));
        }
        let mut seen = tags.to_vec();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != tags.len() || seen.iter().any(|t| t.index() >= self.tags.len()) {
            return Err(HmmError::Invalid(format!("class {name} has repeated or unknown tags")));
        }
        let id = ClassId(self.classes.len() as u32);
        self.classes.push(AmbiguityClass { name: name.to_string(), tags: seen });
        self.class_index.insert(name.to_string(), id);
        Ok(id)
    }

    /// Adds a class named by the bracket convention, or returns the
    /// existing class of that name.
    pub fn intern_class(&mut self, tags: &[TagId]) -> Result<ClassId, HmmError> {
        let mut sorted = tags.to_vec();
        sorted.sort_unstable();
        let names: Vec<&str> = sorted.iter().map(|&t| self.tag(t)).collect();
        let name = class_name_for(&names);
        match self.class_index.get(&name) {
            Some(&c) => Ok(c),
            None => self.add_class(&name, &sorted),
        }
    }

    pub fn num_tags(&self) -> usize {
        self.tags.len()
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn tag_ids(&self) -> impl Iterator<Item = TagId> {
        (0..self.tags.len() as u32).map(TagId)
    }

    pub fn class_ids(&self) -> impl Iterator<Item = ClassId> {
        (0..self.classes.len() as u32).map(ClassId)
    }

    pub fn tag(&self, t: TagId) -> &str {
        &self.tags[t.index()]
    }

    pub fn class(&self, c: ClassId) -> &AmbiguityClass {
        &self.classes[c.index()]
    }

    pub fn class_tags(&self, c: ClassId) -> &[TagId] {
        &self.classes[c.index()].tags
    }

    pub fn tag_id(&self, name: &str) -> Option<TagId> {
        self.tag_index.get(name).copied()
    }

    pub fn class_id(&self, name: &str) -> Option<ClassId> {
        self.class_index.get(name).copied()
    }

    pub fn contains(&self, c: ClassId, t: TagId) -> bool {
        self.class_tags(c).contains(&t)
    }

    /// A class with exactly one tag; it acts as a probability barrier.
    pub fn is_unambiguous(&self, c: ClassId) -> bool {
        self.class_tags(c).len() == 1
    }

    pub fn unambiguous_classes(&self) -> impl Iterator<Item = ClassId> + '_ {
        self.class_ids().filter(|&c| self.is_unambiguous(c))
    }

    pub fn ambiguous_classes(&self) -> impl Iterator<Item = ClassId> + '_ {
        self.class_ids().filter(|&c| !self.is_unambiguous(c))
    }
}

impl SymbolNames for Inventory {
    fn tag_name(&self, tag: TagId) -> &str {
        self.tag(tag)
    }

    fn class_name(&self, class: ClassId) -> &str {
        &self.class(class).name
    }

    fn tag_by_name(&self, name: &str) -> Option<TagId> {
        self.tag_id(name)
    }

    fn class_by_name(&self, name: &str) -> Option<ClassId> {
        self.class_id(name)
    }
}
