use num_bigint::BigUint;

/// A message as an exact bit string. Frame accounting uses `len_bits`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Payload {
    words: Vec<u64>,
    len: usize,
}

impl Payload {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn len_bits(&self) -> usize {
        self.len
    }

    pub fn reader(&self) -> BitReader<'_> {
        BitReader { payload: self, pos: 0 }
    }
}

#[derive(Debug, Default)]
pub struct BitWriter {
    payload: Payload,
}

impl BitWriter {
    pub fn new() -> Self {
        Self::default()
    }

    fn push_bit(&mut self, bit: bool) {
        let p = &mut self.payload;
        if p.len.is_multiple_of(64) {
            p.words.push(0);
        }
        if bit {
            p.words[p.len / 64] |= 1 << (p.len % 64);
        }
        p.len += 1;
    }

    /// Writes the low `width` bits of `value`. Panics if `value` does not fit.
    pub fn uint(mut self, value: u64, width: u32) -> Self {
        assert!(width == 64 || value >> width == 0, "value {value} does not fit in {width} bits");
        for i in 0..width {
            self.push_bit(value >> i & 1 == 1);
        }
        self
    }

    pub fn flag(mut self, bit: bool) -> Self {
        self.push_bit(bit);
        self
    }

    pub fn big(mut self, value: &BigUint, width: u32) -> Self {
        assert!(value.bits() <= width as u64, "big value does not fit in {width} bits");
        for i in 0..width as u64 {
            self.push_bit(value.bit(i));
        }
        self
    }

    pub fn finish(self) -> Payload {
        self.payload
    }
}

pub struct BitReader<'a> {
    payload: &'a Payload,
    pos: usize,
}

impl BitReader<'_> {
    fn next_bit(&mut self) -> Result<bool, String> {
        if self.pos >= self.payload.len {
            return Err(format!("read past end of {}-bit payload", self.payload.len));
        }
        let bit = self.payload.words[self.pos / 64] >> (self.pos % 64) & 1 == 1;
        self.pos += 1;
        Ok(bit)
    }

    pub fn uint(&mut self, width: u32) -> Result<u64, String> {
        let mut v = 0u64;
        for i in 0..width {
            if self.next_bit()? {
                v |= 1 << i;
            }
        }
        Ok(v)
    }

    pub fn flag(&mut self) -> Result<bool, String> {
        self.next_bit()
    }

    pub fn big(&mut self, width: u32) -> Result<BigUint, String> {
        let mut v = BigUint::default();
        for i in 0..width as u64 {
            if self.next_bit()? {
                v.set_bit(i, true);
            }
        }
        Ok(v)
    }

    pub fn remaining(&self) -> usize {
        self.payload.len - self.pos
    }
}

/// `ceil(log2 x)`, with `clog2(0) = clog2(1) = 0`.
pub fn clog2(x: u64) -> u32 {
    if x <= 1 {
        0
    } else {
        64 - (x - 1).leading_zeros()
    }
}

/// Bits needed to write every value in `0..=max` (at least 1).
pub fn width_for(max: u64) -> u32 {
    (64 - max.leading_zeros()).max(1)
}

pub fn width_for_big(max: &BigUint) -> u32 {
    (max.bits() as u32).max(1)
}

/// Frames needed to carry `bits` over a `bandwidth`-bit link; an empty
/// message still takes one frame.
pub fn frames(bits: u64, bandwidth: u32) -> u64 {
    bits.div_ceil(bandwidth as u64).max(1)
}
