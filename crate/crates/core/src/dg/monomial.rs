/// A monomial in the dg variables: even factors with exponents (a
/// divided-power exponent when the variable has that kind) followed by the
/// odd factors in increasing id order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub even: Vec<(u32, u32)>,
    pub odd: Vec<u32>,
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn is_one(&self) -> bool {
        self.even.is_empty() && self.odd.is_empty()
    }

    pub fn even_var(v: u32, e: u32) -> Self {
        if e == 0 {
            return Self::one();
        }
        Self {
            even: vec![(v, e)],
            odd: Vec::new(),
        }
    }

    pub fn odd_var(v: u32) -> Self {
        Self {
            even: Vec::new(),
            odd: vec![v],
        }
    }

    pub fn exponent(&self, v: u32) -> u32 {
        if self.odd.contains(&v) {
            return 1;
        }
        self.even
            .iter()
            .find(|(w, _)| *w == v)
            .map_or(0, |&(_, e)| e)
    }

    /// Total number of factors, counting exponents.
    pub fn weight(&self) -> u32 {
        self.even.iter().map(|&(_, e)| e).sum::<u32>() + self.odd.len() as u32
    }

    /// The single variable this monomial equals, if it is linear.
    pub fn as_variable(&self) -> Option<u32> {
        match (self.even.as_slice(), self.odd.as_slice()) {
            ([(v, 1)], []) => Some(*v),
            ([], [v]) => Some(*v),
            _ => None,
        }
    }

    pub fn variables(&self) -> impl Iterator<Item = u32> + '_ {
        self.even.iter().map(|&(v, _)| v).chain(self.odd.iter().copied())
    }

    pub fn with_exponent(&self, v: u32, e: u32) -> Self {
        let mut out = self.clone();
        out.even.retain(|&(w, _)| w != v);
        if e > 0 {
            let pos = out.even.partition_point(|&(w, _)| w < v);
            out.even.insert(pos, (v, e));
        }
        out
    }

    pub(crate) fn check(&self) -> bool {
        self.even.windows(2).all(|w| w[0].0 < w[1].0)
            && self.even.iter().all(|&(_, e)| e > 0)
            && self.odd.windows(2).all(|w| w[0] < w[1])
    }
}
