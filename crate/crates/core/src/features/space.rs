use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub const SPACE_FORMAT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum BlockTag {
    #[serde(rename = "U")]
    Unigram,
    #[serde(rename = "L")]
    Linguistic,
    #[serde(rename = "E")]
    Entity,
}

impl BlockTag {
    pub fn prefix(self) -> &'static str {
        match self {
            BlockTag::Unigram => "U",
            BlockTag::Linguistic => "L",
            BlockTag::Entity => "E",
        }
    }

    /// Column name under which a feature of this block is stored.
    pub fn qualify(self, name: &str) -> String {
        format!("{}:{name}", self.prefix())
    }
}

/// Which feature blocks a space (and every vector built from it) uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BlockSet {
    pub unigram: bool,
    pub linguistic: bool,
    pub entity: bool,
}

impl BlockSet {
    pub const ALL: BlockSet = BlockSet {
        unigram: true,
        linguistic: true,
        entity: true,
    };
    pub const UNIGRAM: BlockSet = BlockSet {
        unigram: true,
        linguistic: false,
        entity: false,
    };

    pub fn contains(self, tag: BlockTag) -> bool {
        match tag {
            BlockTag::Unigram => self.unigram,
            BlockTag::Linguistic => self.linguistic,
            BlockTag::Entity => self.entity,
        }
    }
}

impl Default for BlockSet {
    fn default() -> Self {
        BlockSet::ALL
    }
}

impl fmt::Display for BlockSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<&str> = [BlockTag::Unigram, BlockTag::Linguistic, BlockTag::Entity]
            .into_iter()
            .filter(|t| self.contains(*t))
            .map(BlockTag::prefix)
            .collect();
        f.write_str(&parts.join("+"))
    }
}

impl FromStr for BlockSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut set = BlockSet {
            unigram: false,
            linguistic: false,
            entity: false,
        };
        for part in s.split(|c| c == '+' || c == ',').map(str::trim) {
            match part.to_ascii_uppercase().as_str() {
                "U" => set.unigram = true,
                "L" => set.linguistic = true,
                "E" => set.entity = true,
                other => return Err(Error::Format(format!("unknown feature block {other:?}"))),
            }
        }
        if set == (BlockSet { unigram: false, linguistic: false, entity: false }) {
            return Err(Error::Format("empty feature block set".into()));
        }
        Ok(set)
    }
}

/// Frozen column dictionary shared by training and scoring.
#[derive(Clone, Debug, PartialEq)]
pub struct FeatureSpace {
    pub(crate) name_to_index: BTreeMap<String, usize>,
    pub(crate) idf: BTreeMap<String, f64>,
    pub(crate) doc_count: usize,
    pub(crate) frozen: bool,
    pub(crate) block_tags: Vec<BlockTag>,
    pub(crate) blocks: BlockSet,
    pub(crate) lexicon_checksums: BTreeMap<String, String>,
}

impl FeatureSpace {
    pub(crate) fn new(blocks: BlockSet, doc_count: usize, lexicon_checksums: BTreeMap<String, String>) -> Self {
        FeatureSpace {
            name_to_index: BTreeMap::new(),
            idf: BTreeMap::new(),
            doc_count,
            frozen: false,
            block_tags: Vec::new(),
            blocks,
            lexicon_checksums,
        }
    }

    /// Assigns dense indices in lexicographic order of qualified names and
    /// freezes the space.
    pub(crate) fn freeze(&mut self, names: BTreeSet<String>) {
        self.name_to_index = names.into_iter().enumerate().map(|(i, n)| (n, i)).collect();
        self.block_tags = vec![BlockTag::Unigram; self.name_to_index.len()];
        for (name, &i) in &self.name_to_index {
            self.block_tags[i] = match &name[..1] {
                "L" => BlockTag::Linguistic,
                "E" => BlockTag::Entity,
                _ => BlockTag::Unigram,
            };
        }
        self.frozen = true;
    }

    pub fn len(&self) -> usize {
        self.name_to_index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.name_to_index.is_empty()
    }

    pub fn is_frozen(&self) -> bool {
        self.frozen
    }

    pub fn blocks(&self) -> BlockSet {
        self.blocks
    }

    pub fn doc_count(&self) -> usize {
        self.doc_count
    }

    pub fn index_of(&self, tag: BlockTag, name: &str) -> Option<usize> {
        self.name_to_index.get(&tag.qualify(name)).copied()
    }

    pub fn idf(&self, term: &str) -> Option<f64> {
        self.idf.get(term).copied()
    }

    pub fn block_of(&self, index: usize) -> Option<BlockTag> {
        self.block_tags.get(index).copied()
    }

    /// Qualified column names ordered by index.
    pub fn names(&self) -> Vec<&str> {
        let mut names = vec![""; self.len()];
        for (n, &i) in &self.name_to_index {
            names[i] = n;
        }
        names
    }

    /// SHA-256 over the canonical JSON of the column dictionary, IDF table,
    /// block set and lexicon checksums.
    pub fn checksum(&self) -> String {
        let canonical = serde_json::json!({
            "blocks": self.blocks.to_string(),
            "doc_count": self.doc_count,
            "name_to_index": self.name_to_index,
            "idf": self.idf,
            "lexicon_checksums": self.lexicon_checksums,
        });
        hex(&Sha256::digest(canonical.to_string().as_bytes()))
    }

    pub fn to_json(&self) -> Result<String> {
        if !self.frozen {
            return Err(Error::UnfrozenSpace);
        }
        let file = SpaceFile {
            version: SPACE_FORMAT_VERSION,
            blocks: self.blocks.to_string(),
            doc_count: self.doc_count,
            name_to_index: self.name_to_index.clone(),
            idf: self.idf.clone(),
            lexicon_checksums: self.lexicon_checksums.clone(),
            checksum: self.checksum(),
        };
        Ok(serde_json::to_string_pretty(&file).expect("space serializes") + "\n")
    }

    pub fn from_json(src: &str) -> Result<Self> {
        let file: SpaceFile =
            serde_json::from_str(src).map_err(|e| Error::Format(format!("feature space: {e}")))?;
        if file.version != SPACE_FORMAT_VERSION {
            return Err(Error::Format(format!(
                "feature space version {} unsupported",
                file.version
            )));
        }
        let mut space = FeatureSpace::new(file.blocks.parse()?, file.doc_count, file.lexicon_checksums);
        space.idf = file.idf;
        let names: BTreeSet<String> = file.name_to_index.keys().cloned().collect();
        space.freeze(names);
        if space.name_to_index != file.name_to_index {
            return Err(Error::Format("feature space indices are not in canonical order".into()));
        }
        if space.checksum() != file.checksum {
            return Err(Error::Format("feature space checksum mismatch".into()));
        }
        Ok(space)
    }
}

#[derive(Serialize, Deserialize)]
struct SpaceFile {
    version: u32,
    blocks: String,
    doc_count: usize,
    name_to_index: BTreeMap<String, usize>,
    idf: BTreeMap<String, f64>,
    lexicon_checksums: BTreeMap<String, String>,
    checksum: String,
}

pub(crate) fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}
