use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};

/// Hard upper bound on the number of autonomous players a [`JointAction`] can hold.
pub const MAX_AV: usize = 64;

/// Route choices of the autonomous players, one bit per player.
///
/// Bit `k` is the route of autonomous player `k` (0 = Route 0, 1 = Route 1).
/// The textual form lists player 0 first: `0100011000` is player 1, 5 and 6
/// on Route 1.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JointAction {
    len: u8,
    bits: u64,
}

impl JointAction {
    /// The all-zeros action where everyone takes Route 0.
    pub fn zeros(len: usize) -> Self {
        assert!(len <= MAX_AV, "at most {MAX_AV} autonomous players");
        JointAction { len: len as u8, bits: 0 }
    }

    pub fn from_bits(len: usize, bits: u64) -> Result<Self> {
        if len > MAX_AV {
            return Err(Error::LengthMismatch { expected: MAX_AV, found: len });
        }
        if len < 64 && bits >> len != 0 {
            return Err(Error::PlayerOutOfRange { player: 63 - bits.leading_zeros() as usize, n_av: len });
        }
        Ok(JointAction { len: len as u8, bits })
    }

    /// The action where exactly the members of `c` take Route 1.
    pub fn indicator(len: usize, c: Coalition) -> Result<Self> {
        Self::from_bits(len, c.bits())
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Integer encoding in `[0, 2^len)`.
    pub fn bits(&self) -> u64 {
        self.bits
    }

    /// Route of autonomous player `k`.
    pub fn route(&self, k: usize) -> u8 {
        debug_assert!(k < self.len());
        ((self.bits >> k) & 1) as u8
    }

    /// Number of autonomous players on Route 1.
    pub fn route1_count(&self) -> usize {
        self.bits.count_ones() as usize
    }

    /// Players currently on Route 1, as a coalition.
    pub fn on_route1(&self) -> Coalition {
        Coalition(self.bits)
    }

    /// Flip the route of every member of `c`.
    pub fn deviate(&self, c: Coalition) -> Result<Self> {
        self.check(c)?;
        Ok(JointAction { len: self.len, bits: self.bits ^ c.bits() })
    }

    pub(crate) fn check(&self, c: Coalition) -> Result<()> {
        if self.len < 64 && c.bits() >> self.len != 0 {
            let player = 63 - c.bits().leading_zeros() as usize;
            return Err(Error::PlayerOutOfRange { player, n_av: self.len() });
        }
        Ok(())
    }

    /// Every joint action of `len` players in increasing integer order.
    pub fn all(len: usize) -> impl Iterator<Item = JointAction> {
        assert!(len < 64, "cannot enumerate 2^{len} actions");
        (0..1u64 << len).map(move |bits| JointAction { len: len as u8, bits })
    }
}

impl fmt::Display for JointAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for k in 0..self.len() {
            f.write_str(if self.route(k) == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for JointAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "JointAction({self})")
    }
}

impl FromStr for JointAction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.len() > MAX_AV {
            return Err(Error::Parse(alloc::format!("joint action longer than {MAX_AV} players")));
        }
        let mut bits = 0u64;
        for (k, ch) in s.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => bits |= 1 << k,
                other => {
                    return Err(Error::Parse(alloc::format!(
                        "invalid character {other:?} in joint action {s:?}"
                    )))
                }
            }
        }
        JointAction::from_bits(s.len(), bits)
    }
}

/// A set of autonomous players, stored as a bitmask.
///
/// Ordered by size first, then lexicographically by sorted member list, so
/// `{0,1} < {0,3} < {1,2} < {0,1,2}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Coalition(u64);

impl Coalition {
    pub const EMPTY: Coalition = Coalition(0);

    pub fn from_bits(bits: u64) -> Self {
        Coalition(bits)
    }

    pub fn singleton(player: usize) -> Self {
        assert!(player < MAX_AV);
        Coalition(1 << player)
    }

    /// All players `0..n`.
    pub fn grand(n: usize) -> Self {
        assert!(n <= MAX_AV);
        if n == 64 {
            Coalition(u64::MAX)
        } else {
            Coalition((1u64 << n) - 1)
        }
    }

    pub fn bits(&self) -> u64 {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn contains(&self, player: usize) -> bool {
        player < MAX_AV && self.0 >> player & 1 == 1
    }

    pub fn with(&self, player: usize) -> Self {
        Coalition(self.0 | 1 << player)
    }

    pub fn without(&self, player: usize) -> Self {
        Coalition(self.0 & !(1 << player))
    }

    pub fn union(&self, other: Coalition) -> Self {
        Coalition(self.0 | other.0)
    }

    pub fn is_subset(&self, other: Coalition) -> bool {
        self.0 & !other.0 == 0
    }

    /// Members in ascending order.
    pub fn members(&self) -> Members {
        Members(self.0)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.members().collect()
    }
}

impl FromIterator<usize> for Coalition {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        iter.into_iter().fold(Coalition::EMPTY, |c, p| c.with(p))
    }
}

impl<const N: usize> From<[usize; N]> for Coalition {
    fn from(members: [usize; N]) -> Self {
        members.into_iter().collect()
    }
}

pub struct Members(u64);

impl Iterator for Members {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let p = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(p)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Members {}

impl Ord for Coalition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| {
            let diff = self.0 ^ other.0;
            if diff == 0 {
                Ordering::Equal
            } else if self.0 >> diff.trailing_zeros() & 1 == 1 {
                // Below the first difference both lists agree; whoever holds
                // the lowest differing player has the smaller next element.
                Ordering::Less
            } else {
                Ordering::Greater
            }
        })
    }
}

impl PartialOrd for Coalition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, p) in self.members().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Coalition {
    type Err = Error;

    /// Accepts `{1,5,6}`, `1,5,6` or `{}`.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('{').trim_end_matches('}').trim();
        if inner.is_empty() {
            return Ok(Coalition::EMPTY);
        }
        let mut c = Coalition::EMPTY;
        for part in inner.split(',') {
            let p: usize = part
                .trim()
                .parse()
                .map_err(|_| Error::Parse(alloc::format!("invalid player {part:?} in {s:?}")))?;
            if p >= MAX_AV {
                return Err(Error::PlayerOutOfRange { player: p, n_av: MAX_AV });
            }
            c = c.with(p);
        }
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn ja(s: &str) -> JointAction {
        s.parse().unwrap()
    }

    #[test]
    fn deviate_flips_members() {
        let x0 = JointAction::zeros(10);
        let c = Coalition::from([1, 5, 6]);
        let y = x0.deviate(c).unwrap();
        assert_eq!(y.to_string(), "0100011000");
        assert_eq!(y.deviate(c).unwrap(), x0);
        assert_eq!(ja("1111111111").deviate(Coalition::singleton(0)).unwrap().to_string(), "0111111111");
    }

    #[test]
    fn deviate_rejects_outsiders() {
        let err = JointAction::zeros(3).deviate(Coalition::from([1, 4])).unwrap_err();
        assert_eq!(err, Error::PlayerOutOfRange { player: 4, n_av: 3 });
    }

    #[test]
    fn text_form_round_trips() {
        for s in ["", "0", "1", "0100011000", "1111111111"] {
            assert_eq!(ja(s).to_string(), s);
        }
        assert!("01x".parse::<JointAction>().is_err());
    }

    #[test]
    fn coalition_order_is_size_then_lex() {
        let mut cs = [
            Coalition::from([1, 2]),
            Coalition::from([0, 1, 2]),
            Coalition::from([0, 3]),
            Coalition::from([4]),
            Coalition::from([0, 1]),
        ];
        cs.sort();
        let shown: Vec<_> = cs.iter().map(|c| c.to_string()).collect();
        assert_eq!(shown, ["{4}", "{0,1}", "{0,3}", "{1,2}", "{0,1,2}"]);
    }

    #[test]
    fn coalition_parse_and_display() {
        let c: Coalition = "{0, 1,5,6}".parse().unwrap();
        assert_eq!(c.to_vec(), vec![0, 1, 5, 6]);
        assert_eq!(c.to_string(), "{0,1,5,6}");
        assert_eq!("{}".parse::<Coalition>().unwrap(), Coalition::EMPTY);
        assert!("{a}".parse::<Coalition>().is_err());
    }
}
