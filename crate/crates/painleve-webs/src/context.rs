use std::sync::Arc;

/// Index of a variable inside its [`VariableContext`].
pub type Var = usize;

/// An ordered variable universe: exactly three surface variables followed by
/// the (possibly empty) list of parameters. Every polynomial and rational
/// function carries a shared reference to the context it was built over; the
/// ordering is fixed for the lifetime of any such value.
#[derive(Debug, PartialEq, Eq)]
pub struct VariableContext {
    names: Vec<String>,
}

pub const N_SURFACE_VARS: usize = 3;

impl VariableContext {
    /// Builds a context from explicit surface variable names and parameters.
    ///
    /// Panics when a name is duplicated (in particular when a parameter
    /// collides with a surface variable).
    pub fn with_surface_vars(surface: [&str; N_SURFACE_VARS], params: &[&str]) -> Arc<Self> {
        let mut names: Vec<String> = surface.iter().map(|s| s.to_string()).collect();
        names.extend(params.iter().map(|s| s.to_string()));
        for (i, a) in names.iter().enumerate() {
            assert!(!a.is_empty(), "empty variable name");
            for b in names.iter().skip(i + 1) {
                assert!(a != b, "duplicate variable name `{a}` in context");
            }
        }
        Arc::new(VariableContext { names })
    }

    /// The standard context: surface variables `x1, x2, x3` plus `params`.
    pub fn standard(params: &[&str]) -> Arc<Self> {
        Self::with_surface_vars(["x1", "x2", "x3"], params)
    }

    pub fn n_vars(&self) -> usize {
        self.names.len()
    }

    pub fn n_params(&self) -> usize {
        self.names.len() - N_SURFACE_VARS
    }

    pub fn name(&self, v: Var) -> &str {
        &self.names[v]
    }

    pub fn var(&self, name: &str) -> Option<Var> {
        self.names.iter().position(|n| n == name)
    }

    pub fn is_param(&self, v: Var) -> bool {
        v >= N_SURFACE_VARS
    }

    pub fn surface_vars(&self) -> impl Iterator<Item = Var> {
        0..N_SURFACE_VARS
    }

    pub fn param_vars(&self) -> impl Iterator<Item = Var> + '_ {
        N_SURFACE_VARS..self.names.len()
    }

    pub fn all_vars(&self) -> impl Iterator<Item = Var> + '_ {
        0..self.names.len()
    }

    pub fn param_names(&self) -> Vec<String> {
        self.names[N_SURFACE_VARS..].to_vec()
    }
}

/// Two contexts are interchangeable when they agree by value; pointer equality
/// is the fast path.
pub fn same_context(a: &Arc<VariableContext>, b: &Arc<VariableContext>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}
