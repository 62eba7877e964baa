use crate::error::{Error, Result};

/// Size caps for the heavier computations.
///
/// Everything here is desk-scale: plane tables hold `q^2` entries, dimension-4
/// spectra hold `q^4`, and brute-force oracles enumerate up to `|E|^8` tuples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest field order accepted by [`crate::field::FieldCtx`].
    pub max_q: u32,
    /// Largest `q` for `F_q^4` tables (transforms of `E x E`, `mu` tables).
    pub dim4_q: u32,
    /// Largest `q` for sums over the product group `G1`.
    pub g1_q: u32,
    /// Largest `|E|` for which 8-tuple enumeration is allowed.
    pub brute_size: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_q: 2048,
            dim4_q: 13,
            g1_q: 31,
            brute_size: 6,
        }
    }
}

impl Limits {
    pub fn check_q(&self, q: u32) -> Result<()> {
        check("field order", q as u64, self.max_q as u64)
    }

    pub fn check_dim4(&self, q: u32) -> Result<()> {
        check("q for F_q^4 tables", q as u64, self.dim4_q as u64)
    }

    pub fn check_g1(&self, q: u32) -> Result<()> {
        check("q for G1 sums", q as u64, self.g1_q as u64)
    }

    pub fn check_brute(&self, size: usize) -> Result<()> {
        check(
            "|E| for 8-tuple enumeration",
            size as u64,
            self.brute_size as u64,
        )
    }

    /// Parses `key=value` pairs separated by commas, starting from `self`.
    ///
    /// Keys: `max_q`, `dim4_q`, `g1_q`, `brute`.
    pub fn parse_overrides(mut self, text: &str) -> Result<Self> {
        for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::precondition(alloc::format!("bad limit `{part}`")))?;
            let value: u64 = value
                .trim()
                .parse()
                .map_err(|_| Error::precondition(alloc::format!("bad limit value `{part}`")))?;
            match key.trim() {
                "max_q" => self.max_q = value as u32,
                "dim4_q" => self.dim4_q = value as u32,
                "g1_q" => self.g1_q = value as u32,
                "brute" => self.brute_size = value as usize,
                other => {
                    return Err(Error::precondition(alloc::format!(
                        "unknown limit key `{other}`"
                    )))
                }
            }
        }
        Ok(self)
    }
}

fn check(what: &'static str, value: u64, limit: u64) -> Result<()> {
    if value > limit {
        Err(Error::LimitExceeded { what, value, limit })
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides_parse() {
        let l = Limits::default().parse_overrides("max_q=101, brute=4").unwrap();
        assert_eq!(l.max_q, 101);
        assert_eq!(l.brute_size, 4);
        assert_eq!(l.dim4_q, Limits::default().dim4_q);
        assert!(Limits::default().parse_overrides("nope=1").is_err());
        assert!(Limits::default().parse_overrides("max_q").is_err());
    }

    #[test]
    fn checks_reject_over_limit() {
        let l = Limits::default();
        assert!(l.check_dim4(13).is_ok());
        assert!(matches!(l.check_dim4(17), Err(Error::LimitExceeded { .. })));
    }
}
