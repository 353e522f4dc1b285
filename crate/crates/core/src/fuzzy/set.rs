use alloc::string::String;

/// Membership shape with begin-support, begin-core, end-core, end-support
/// breakpoints. A triangle is a trapezoid whose core is a single point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Shape {
    Trapezoid { bs: f64, bc: f64, ec: f64, es: f64 },
    Triangle { bs: f64, c: f64, es: f64 },
}

impl Shape {
    /// Canonical shape for `[BS, BC, EC, ES]`: a triangle when `BC == EC`.
    pub fn from_params([bs, bc, ec, es]: [f64; 4]) -> Self {
        if bc == ec {
            Shape::Triangle { bs, c: bc, es }
        } else {
            Shape::Trapezoid { bs, bc, ec, es }
        }
    }

    pub fn params(&self) -> [f64; 4] {
        match *self {
            Shape::Trapezoid { bs, bc, ec, es } => [bs, bc, ec, es],
            Shape::Triangle { bs, c, es } => [bs, c, c, es],
        }
    }

    pub fn begin_support(&self) -> f64 {
        self.params()[0]
    }

    pub fn begin_core(&self) -> f64 {
        self.params()[1]
    }

    pub fn end_support(&self) -> f64 {
        self.params()[3]
    }

    pub fn is_ordered(&self) -> bool {
        let p = self.params();
        p.iter().all(|x| x.is_finite()) && p[0] <= p[1] && p[1] <= p[2] && p[2] <= p[3]
    }

    /// Piecewise-linear membership. Zero-width ramps are step edges that
    /// take the core value at the breakpoint.
    #[inline]
    pub fn membership(&self, x: f64) -> f64 {
        let [bs, bc, ec, es] = self.params();
        trapezoid(bs, bc, ec, es, x)
    }
}

#[inline]
pub(crate) fn trapezoid(bs: f64, bc: f64, ec: f64, es: f64, x: f64) -> f64 {
    if x < bs || x > es {
        0.0
    } else if x < bc {
        (x - bs) / (bc - bs)
    } else if x <= ec {
        1.0
    } else {
        (es - x) / (es - ec)
    }
}

/// Linguistic hedge; only the identity hedge is supported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Hedge {
    #[default]
    Normal,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FuzzySet {
    pub name: String,
    pub shape: Shape,
    pub hedge: Hedge,
}

impl FuzzySet {
    pub fn new(name: impl Into<String>, shape: Shape) -> Self {
        Self {
            name: name.into(),
            shape,
            hedge: Hedge::Normal,
        }
    }

    pub fn from_params(name: impl Into<String>, params: [f64; 4]) -> Self {
        Self::new(name, Shape::from_params(params))
    }

    pub fn membership(&self, x: f64) -> f64 {
        self.shape.membership(x)
    }
}

pub fn membership(set: &FuzzySet, x: f64) -> f64 {
    set.membership(x)
}
