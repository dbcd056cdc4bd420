use crate::error::{Error, Result};

/// A string over the alphabet `[sigma]`, one byte per symbol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ByteString {
    data: Vec<u8>,
    sigma: u32,
}

impl ByteString {
    pub fn new(data: Vec<u8>, sigma: u32) -> Result<Self> {
        if sigma == 0 || sigma > 256 {
            return Err(Error::InvalidParameter(format!(
                "alphabet size {sigma} must lie in [1, 256]"
            )));
        }
        if let Some(offset) = data.iter().position(|&c| c as u32 >= sigma) {
            return Err(Error::SymbolOutOfRange {
                symbol: data[offset] as u32,
                offset,
                sigma,
            });
        }
        Ok(ByteString { data, sigma })
    }

    /// Raw bytes over the full byte alphabet.
    pub fn from_bytes(data: impl Into<Vec<u8>>) -> Self {
        ByteString {
            data: data.into(),
            sigma: 256,
        }
    }

    pub fn sigma(&self) -> u32 {
        self.sigma
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<u8> {
        self.data
    }
}

impl std::ops::Deref for ByteString {
    type Target = [u8];

    fn deref(&self) -> &[u8] {
        &self.data
    }
}

impl From<&str> for ByteString {
    fn from(s: &str) -> Self {
        ByteString::from_bytes(s.as_bytes())
    }
}
