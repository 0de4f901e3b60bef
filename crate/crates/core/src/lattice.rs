//! The even lattices `L(N, D)` of signature (2,1) inside traceless real 2×2
//! matrices with the form `(X, Y) = Tr(XY)`, and their conjugates by the
//! diagonal scaling with ratio `M`.
//!
//! `SL₂(ℝ)` acts by conjugation. The stored basis is `αE, βF, γH` with
//! `α = √(DM/T)`, `β = √(DT/M)`, `γ = √(MT/D)` and `N = MT`; the plain lattice
//! is `T = N, M = 1`. The dual basis is ordered so that it pairs to the
//! identity with the primal one, hence the discriminant group is
//! `ℤ/D × ℤ/D × ℤ/(2N/D)` in dual coordinates.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::gammastar::{GammaStarElem, IntMatrix, Matrix2, SqrtRat};
use crate::normalizer::{scale_conjugate, sigma_square_kernel_bound};
use crate::numtheory::{gcd, prime_divisors, sqrt_of_square_part};
use crate::subgroups::{subgroup_square_kernel, units, GammaHMembership, ResidueSubgroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LatticeND {
    t: u64,
    m: u64,
    d: u64,
}

/// `√(p/q)`.
fn sqrt_ratio(p: u64, q: u64) -> SqrtRat {
    SqrtRat::new(BigRational::new(BigInt::one(), BigInt::from(q)), p * q)
}

fn mat(e: SqrtRat, f: SqrtRat, g: SqrtRat, h: SqrtRat) -> Matrix2 {
    Matrix2::new(e, f, g, h)
}

/// `Tr(XY)`.
pub fn pairing(x: &Matrix2, y: &Matrix2) -> Result<SqrtRat> {
    (&x.e * &y.e)
        .checked_add(&(&x.f * &y.g))?
        .checked_add(&(&x.g * &y.f))?
        .checked_add(&(&x.h * &y.h))
}

fn residue(x: &BigInt, n: u64) -> u64 {
    x.mod_floor(&BigInt::from(n))
        .to_u64()
        .expect("residue fits")
}

fn rational_entry(x: SqrtRat) -> Result<BigRational> {
    x.to_rational().ok_or(Error::NotAnAutomorphism)
}

impl LatticeND {
    /// `L(N, D)`.
    pub fn new(n: u64, d: u64) -> Result<Self> {
        Self::family(n, 1, d)
    }

    /// The lattice spanned by `√(DM/T)E`, `√(DT/M)F`, `√(MT/D)H`.
    pub fn family(t: u64, m: u64, d: u64) -> Result<Self> {
        if t == 0 || m == 0 || d == 0 {
            return Err(Error::Zero);
        }
        let n = m.checked_mul(t).ok_or(Error::Zero)?;
        if n % d != 0 {
            return Err(Error::NotADivisor { d, n });
        }
        Ok(LatticeND { t, m, d })
    }

    pub fn n(&self) -> u64 {
        self.m * self.t
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn is_plain(&self) -> bool {
        self.m == 1
    }

    pub fn basis(&self) -> [Matrix2; 3] {
        let (t, m, d) = (self.t, self.m, self.d);
        let z = SqrtRat::zero;
        let g = sqrt_ratio(m * t, d);
        [
            mat(z(), sqrt_ratio(d * m, t), z(), z()),
            mat(z(), z(), sqrt_ratio(d * t, m), z()),
            mat(g.clone(), z(), z(), -g),
        ]
    }

    /// Dual vectors, `dual[i]` pairing to 1 with `basis[i]` and to 0 otherwise.
    pub fn dual_basis(&self) -> [Matrix2; 3] {
        let (t, m, d) = (self.t, self.m, self.d);
        let z = SqrtRat::zero;
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let g = sqrt_ratio(d, m * t).scale(&half);
        [
            mat(z(), z(), sqrt_ratio(t, d * m), z()),
            mat(z(), sqrt_ratio(m, d * t), z(), z()),
            mat(g.clone(), z(), z(), -g),
        ]
    }

    /// Gram matrix computed from the trace form.
    pub fn gram(&self) -> Result<[[BigInt; 3]; 3]> {
        let b = self.basis();
        let mut out: [[BigInt; 3]; 3] = Default::default();
        for i in 0..3 {
            for j in 0..3 {
                out[i][j] = pairing(&b[i], &b[j])?
                    .to_integer()
                    .ok_or_else(|| Error::NotIntegral(format!("Gram entry ({i},{j})")))?;
            }
        }
        Ok(out)
    }

    /// `[[0, D, 0], [D, 0, 0], [0, 0, 2N/D]]`.
    pub fn gram_closed_form(&self) -> [[u64; 3]; 3] {
        let d = self.d;
        [[0, d, 0], [d, 0, 0], [0, 0, 2 * self.n() / d]]
    }

    /// Orders of the dual generators in the discriminant group.
    pub fn disc_orders(&self) -> [u64; 3] {
        [self.d, self.d, 2 * self.n() / self.d]
    }

    pub fn disc_order(&self) -> u64 {
        2 * self.n() * self.d
    }

    /// Matrix of `X ↦ AXA⁻¹` in the primal basis (column `j` is the image of
    /// `basis[j]`); rational entries.
    pub fn action_matrix(&self, a: &Matrix2) -> Result<[[BigRational; 3]; 3]> {
        let basis = self.basis();
        let dual = self.dual_basis();
        let mut out: [[BigRational; 3]; 3] = Default::default();
        for j in 0..3 {
            let img = a.conjugate(&basis[j])?;
            for i in 0..3 {
                out[i][j] = rational_entry(pairing(&img, &dual[i])?)?;
            }
        }
        Ok(out)
    }

    /// Whether conjugation by the real matrix `a` maps the lattice onto itself.
    pub fn preserves(&self, a: &Matrix2) -> Result<bool> {
        match self.action_matrix(a) {
            Ok(r) => Ok(r.iter().flatten().all(|x| x.is_integer())),
            Err(Error::NotAnAutomorphism) => Ok(false),
            Err(e) => Err(e),
        }
    }

    /// A level-`N` element moved to the side of this lattice.
    pub fn embed(&self, a: &GammaStarElem) -> Matrix2 {
        scale_conjugate(&a.matrix(), self.m)
    }

    /// The inverse of `embed` on matrices.
    pub fn unembed(&self, x: &Matrix2) -> Matrix2 {
        let r = BigRational::from_integer(BigInt::from(self.m));
        Matrix2::new(
            x.e.clone(),
            x.f.scale(&r.recip()),
            x.g.scale(&r),
            x.h.clone(),
        )
    }

    /// Action on the discriminant group in dual coordinates.
    pub fn disc_action_matrix(&self, a: &Matrix2) -> Result<DiscAutomorphism> {
        let basis = self.basis();
        let dual = self.dual_basis();
        let orders = self.disc_orders();
        let mut m = [[0u64; 3]; 3];
        for j in 0..3 {
            let img = a.conjugate(&dual[j])?;
            for i in 0..3 {
                let x = rational_entry(pairing(&img, &basis[i])?)?;
                if !x.is_integer() {
                    return Err(Error::NotAnAutomorphism);
                }
                m[i][j] = residue(&x.to_integer(), orders[i]);
            }
        }
        Ok(DiscAutomorphism { orders, m })
    }

    /// `gcd(D, 2N/D) / 2^θ`, `θ = 1` iff `2v₂(D) = v₂(N) + 1`.
    pub fn saut_plus_sigma(&self) -> u64 {
        sigma_square_kernel_bound(self.n(), self.d).expect("D divides N")
    }

    /// Units whose square is 1 modulo `D`.
    pub fn kernel_subgroup(&self) -> ResidueSubgroup {
        subgroup_square_kernel(self.n(), self.d).expect("D divides N")
    }

    /// The discriminant kernel of `L(N, D)` as a group `Γ_H`; on a conjugated
    /// lattice this is the group before `embed`.
    pub fn discriminant_kernel(&self) -> GammaHMembership {
        GammaHMembership::new(self.kernel_subgroup())
    }

    /// Closed-form membership in `SAut⁺` for a matrix on this lattice's side.
    pub fn saut_contains(&self, x: &Matrix2) -> Result<bool> {
        match GammaStarElem::from_matrix(self.n(), &self.unembed(x)) {
            Ok(e) => Ok(self.saut_plus_sigma() % e.sigma_level() == 0),
            Err(Error::NotMember(_)) => Ok(false),
            Err(e) => Err(e),
        }
    }

    /// Closed-form membership in the discriminant kernel: `T | c`, `M | b`,
    /// `a² ≡ 1 (mod D)`.
    pub fn kernel_contains(&self, g: &IntMatrix) -> bool {
        let one = BigInt::one();
        let d = BigInt::from(self.d);
        g.det() == one
            && g.c.is_multiple_of(&BigInt::from(self.t))
            && g.b.is_multiple_of(&BigInt::from(self.m))
            && (&g.a * &g.a - &one).is_multiple_of(&d)
    }

    /// Units `x` modulo `N` whose diagonal lift acts trivially on the
    /// discriminant group.
    pub fn brute_force_kernel(&self) -> Result<ResidueSubgroup> {
        let n = self.n();
        let full = GammaHMembership::new(ResidueSubgroup::full(n));
        let mut elems = Vec::new();
        for x in units(n) {
            let lift = full.lift(x)?;
            let img = self.embed(&GammaStarElem::from_gamma0(n, &lift)?);
            if self.disc_action_matrix(&img)?.is_identity() {
                elems.push(x);
            }
        }
        ResidueSubgroup::new(n, elems)
    }

    /// `√M`-rescaling data: when `M | T` and `M | D` this lattice is `L(T/M, D/M)`
    /// scaled by `√M`.
    pub fn rescaled_base(&self) -> Option<(LatticeND, u64)> {
        if self.t % self.m == 0 && self.d % self.m == 0 {
            Some((
                LatticeND::new(self.t / self.m, self.d / self.m).ok()?,
                self.m,
            ))
        } else {
            None
        }
    }

    /// `g = gcd(D, N/D)` together with data of the primitive lattice
    /// `L(N/g², D/g)`, of which this one is the rescaling by `g`.
    pub fn iso_invariants(&self) -> IsoInvariants {
        let n = self.n();
        let g = gcd(self.d, n / self.d);
        let prim = LatticeND::new(n / (g * g), self.d / g).expect("D/g divides N/g²");
        let orders = prim.disc_orders();
        let subgroup_counts = prime_divisors(2 * n)
            .into_iter()
            .map(|p| {
                let r = orders.iter().filter(|&&o| o % p == 0).count() as u32;
                (p, (p.pow(r) - 1) / (p - 1))
            })
            .collect();
        IsoInvariants {
            rescale_min: g,
            subgroup_counts,
            disc_order: self.disc_order(),
        }
    }
}

/// `gcd(D, 2N/D, s_N)`, which agrees with `saut_plus_sigma`.
pub fn saut_sigma_via_square_part(n: u64, d: u64) -> u64 {
    gcd(gcd(d, 2 * n / d), sqrt_of_square_part(n))
}

/// An endomorphism of `ℤ/o₀ × ℤ/o₁ × ℤ/o₂`; column `j` is the image of generator `j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiscAutomorphism {
    pub orders: [u64; 3],
    pub m: [[u64; 3]; 3],
}

impl DiscAutomorphism {
    pub fn identity(orders: [u64; 3]) -> Self {
        let mut m = [[0; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1 % orders[i];
        }
        DiscAutomorphism { orders, m }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.orders)
    }

    pub fn apply(&self, v: [u64; 3]) -> [u64; 3] {
        let mut out = [0u64; 3];
        for (i, o) in out.iter_mut().enumerate() {
            let s: u128 = (0..3).map(|j| self.m[i][j] as u128 * v[j] as u128).sum();
            *o = (s % self.orders[i] as u128) as u64;
        }
        out
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &DiscAutomorphism) -> DiscAutomorphism {
        let mut m = [[0u64; 3]; 3];
        for j in 0..3 {
            let col = self.apply([other.m[0][j], other.m[1][j], other.m[2][j]]);
            for i in 0..3 {
                m[i][j] = col[i];
            }
        }
        DiscAutomorphism {
            orders: self.orders,
            m,
        }
    }

    /// Image of the `H` generator lies in its own cyclic factor.
    pub fn stabilizes_h_part(&self) -> bool {
        self.m[0][2] == 0 && self.m[1][2] == 0
    }

    pub fn fixes_h_part_pointwise(&self) -> bool {
        self.stabilizes_h_part() && self.m[2][2] == 1 % self.orders[2]
    }

    /// No mixing among the three cyclic factors.
    pub fn is_diagonal(&self) -> bool {
        (0..3).all(|i| (0..3).all(|j| i == j || self.m[i][j] == 0))
    }
}

/// Data that determine `(N, D)`: `gcd(D, N/D)`, the number of subgroups of
/// order `p` of the primitive lattice's discriminant group for each prime
/// `p | 2N`, and the order of the discriminant group. The counts alone only
/// separate the primes of `D` from those of `N/D`; the order fixes exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IsoInvariants {
    pub rescale_min: u64,
    pub subgroup_counts: Vec<(u64, u64)>,
    pub disc_order: u64,
}

/// `(stabilizes_h_part, fixes_h_part_pointwise, separates_ef)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct StabilizerFlags {
    pub stabilizes_h_part: bool,
    pub fixes_h_part_pointwise: bool,
    pub separates_ef: bool,
}

fn rat_int(x: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// The nine integrality conditions for `A` to act on `L(N, D)`:
/// `a²μ, Dac, c²N/μ, (2N/D)ab, adμ + bcN/μ, (2N/D)cd, b²N/μ, Dbd, d²μ`.
pub fn lattice_conditions(a: &GammaStarElem, l: &LatticeND) -> Result<[bool; 9]> {
    if a.level() != l.n() {
        return Err(Error::LevelMismatch {
            left: a.level(),
            right: l.n(),
        });
    }
    let [x, b, c, d] = a.coefficients();
    let mu = rat_int(a.mu());
    let nmu = rat_int(a.level() / a.mu());
    let dd = rat_int(l.d());
    let q = rat_int(2 * l.n() / l.d());
    let vals = [
        x * x * &mu,
        &dd * x * c,
        c * c * &nmu,
        &q * x * b,
        x * d * &mu + b * c * &nmu,
        &q * c * d,
        b * b * &nmu,
        &dd * b * d,
        d * d * &mu,
    ];
    Ok(vals.map(|v| v.is_integer()))
}

pub fn acts_on_lattice(a: &GammaStarElem, l: &LatticeND) -> Result<bool> {
    Ok(lattice_conditions(a, l)?.iter().all(|&b| b))
}

/// The action of a level-`N` element on the discriminant group of `l`.
pub fn disc_action(a: &GammaStarElem, l: &LatticeND) -> Result<DiscAutomorphism> {
    if !acts_on_lattice(a, l)? {
        return Err(Error::NotAnAutomorphism);
    }
    l.disc_action_matrix(&l.embed(a))
}

/// The presentation with integral `a, b, c, d`, if any.
fn integral_presentation(a: &GammaStarElem) -> Option<GammaStarElem> {
    a.presentations()
        .into_iter()
        .find(|x| x.has_integral_coefficients())
}

/// Flags from the closed forms: the element lies in `Γ₀^*(N)`, and its
/// integral presentation has `μ` prime to `N/D`, resp. to `D`.
pub fn stabilizer_tests(a: &GammaStarElem, l: &LatticeND) -> Result<StabilizerFlags> {
    if !acts_on_lattice(a, l)? {
        return Err(Error::NotAnAutomorphism);
    }
    let none = StabilizerFlags {
        stabilizes_h_part: false,
        fixes_h_part_pointwise: false,
        separates_ef: false,
    };
    if a.sigma_level() != 1 {
        return Ok(none);
    }
    let p = integral_presentation(a).ok_or(Error::NotIntegral(a.to_string()))?;
    let (n, d, mu) = (l.n(), l.d(), p.mu());
    Ok(StabilizerFlags {
        stabilizes_h_part: true,
        fixes_h_part_pointwise: gcd(mu, n / d) == 1,
        separates_ef: gcd(mu, d) == 1,
    })
}

/// The same flags read off the discriminant action.
pub fn stabilizer_flags_from_action(a: &GammaStarElem, l: &LatticeND) -> Result<StabilizerFlags> {
    let act = disc_action(a, l)?;
    Ok(StabilizerFlags {
        stabilizes_h_part: act.stabilizes_h_part(),
        fixes_h_part_pointwise: act.fixes_h_part_pointwise(),
        separates_ef: act.is_diagonal(),
    })
}

/// The lattice of the `(T, M, D)` family.
pub fn conj_family_lattice(t: u64, m: u64, d: u64) -> Result<LatticeND> {
    LatticeND::family(t, m, d)
}

/// Whether the literal reading "squares trivial modulo `N`" gives a different
/// group from the one with squares trivial modulo `D`.
pub fn kernel_readings_differ(l: &LatticeND) -> bool {
    let n = l.n();
    let mod_n = subgroup_square_kernel(n, n).expect("N divides N");
    mod_n != l.kernel_subgroup()
}
