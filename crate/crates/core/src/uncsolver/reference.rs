/// Reference-value bookkeeping for the Dai–Fletcher search.
///
/// `f_min` is the best value seen, `f_c` the largest value since `f_min` was
/// found, and `t` the number of iterations since then. After `T` iterations
/// without improvement the reference `f_r` drops to `f_c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceState {
    pub f_r: f64,
    pub f_min: f64,
    pub f_c: f64,
    pub t: usize,
    pub t_max: usize,
}

impl ReferenceState {
    pub fn new(f1: f64, t_max: usize) -> Self {
        assert!(t_max >= 1, "T must be a positive integer");
        Self { f_r: f1, f_min: f1, f_c: f1, t: 0, t_max }
    }

    pub fn update(&mut self, f_k: f64) {
        if f_k < self.f_min {
            self.f_min = f_k;
            self.f_c = f_k;
            self.t = 0;
        } else {
            self.f_c = self.f_c.max(f_k);
            self.t += 1;
            if self.t == self.t_max {
                self.f_r = self.f_c;
                self.f_c = f_k;
                self.t = 0;
            }
        }
    }
}

pub fn update_reference(mut state: ReferenceState, f_k: f64) -> ReferenceState {
    state.update(f_k);
    state
}
