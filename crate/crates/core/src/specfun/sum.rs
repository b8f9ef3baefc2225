/// Neumaier-compensated accumulator. Keeps the running error of long
/// alternating sums near one ulp of the true result instead of one ulp
/// of the largest partial sum.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct NeumaierSum {
    s: f64,
    c: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.s + x;
        if self.s.abs() >= x.abs() {
            self.c += (self.s - t) + x;
        } else {
            self.c += (x - t) + self.s;
        }
        self.s = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.s + self.c
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_tail() {
        // 1 + 1e-16 added 10_000 times, then -1: naive f64 loses the tail.
        let mut acc = NeumaierSum::new();
        acc.add(1.0);
        for _ in 0..10_000 {
            acc.add(1e-16);
        }
        acc.add(-1.0);
        let got = acc.value();
        // The compensation term itself rounds at its own ulp per add,
        // so ~1e-25 of drift over 10^4 adds is expected; a naive sum
        // would lose the entire 1e-12.
        assert!((got - 1e-12).abs() < 1e-24, "got {got}");
    }
}
