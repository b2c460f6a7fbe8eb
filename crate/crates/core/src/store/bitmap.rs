/// One bit per row; a set bit marks a null. Bits are packed LSB-first, so
/// row `i` lives in bit `i % 8` of byte `i / 8`. Padding bits past `len` are
/// always zero.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NullBitmap {
    bytes: Vec<u8>,
    len: usize,
}

impl NullBitmap {
    pub fn with_capacity(rows: usize) -> Self {
        Self {
            bytes: Vec::with_capacity(rows.div_ceil(8)),
            len: 0,
        }
    }

    pub fn all_valid(rows: usize) -> Self {
        Self {
            bytes: vec![0; rows.div_ceil(8)],
            len: rows,
        }
    }

    /// Rebuilds a bitmap from its packed form. Fails if the byte count does
    /// not match `len` or a padding bit is set.
    pub fn from_bytes(bytes: Vec<u8>, len: usize) -> Option<Self> {
        if bytes.len() != len.div_ceil(8) {
            return None;
        }
        if !len.is_multiple_of(8) {
            let last = *bytes.last()?;
            if last >> (len % 8) != 0 {
                return None;
            }
        }
        Some(Self { bytes, len })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn push(&mut self, null: bool) {
        if self.len.is_multiple_of(8) {
            self.bytes.push(0);
        }
        if null {
            self.bytes[self.len / 8] |= 1 << (self.len % 8);
        }
        self.len += 1;
    }

    #[inline]
    pub fn is_null(&self, row: usize) -> bool {
        assert!(row < self.len, "row {row} out of bounds ({})", self.len);
        self.bytes[row / 8] & (1 << (row % 8)) != 0
    }

    pub fn set_null(&mut self, row: usize) {
        assert!(row < self.len, "row {row} out of bounds ({})", self.len);
        self.bytes[row / 8] |= 1 << (row % 8);
    }

    pub fn null_count(&self) -> usize {
        self.bytes.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.is_null(i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn push_and_count() {
        let mut bm = NullBitmap::with_capacity(10);
        for i in 0..10 {
            bm.push(i % 3 == 0);
        }
        assert_eq!(bm.len(), 10);
        assert_eq!(bm.null_count(), 4);
        assert_eq!(bm.as_bytes(), &[0b0100_1001, 0b0000_0010]);
        assert!(bm.is_null(9));
        assert!(!bm.is_null(8));
    }

    #[test]
    fn from_bytes_validates() {
        assert!(NullBitmap::from_bytes(vec![0xff], 8).is_some());
        assert!(NullBitmap::from_bytes(vec![0b0000_0111], 3).is_some());
        assert!(NullBitmap::from_bytes(vec![0b0000_1000], 3).is_none());
        assert!(NullBitmap::from_bytes(vec![0, 0], 8).is_none());
        assert!(NullBitmap::from_bytes(vec![], 0).is_some());
    }

    #[test]
    #[should_panic]
    fn out_of_bounds() {
        NullBitmap::all_valid(3).is_null(3);
    }
}
