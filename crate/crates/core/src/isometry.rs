//! Semilinear isometries of `F_q^n` and the twisted inner products they
//! induce.
//!
//! An isometry is a pair `(M, e)` of a monomial matrix and a Frobenius
//! exponent, acting as `v -> pi_e(v) M` where `pi_e` raises every
//! coordinate to the `p^e`-th power.  The induced inner product is
//! `<u, v> = sum_i u_i * (pi_e(v) M)_i`; special choices of `(M, e)`
//! recover the Euclidean, Hermitian, Galois, and symplectic products.

use crate::gf::{Element, FieldSpec};
use crate::linalg::{dot, FqMatrix};
use crate::{Error, Result};

/// A monomial matrix together with a Frobenius exponent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Isometry {
    m_tau: FqMatrix,
    e: u32,
}

impl Isometry {
    /// Wrap a monomial matrix and an exponent (reduced mod `h`).
    pub fn new(m_tau: FqMatrix, e: u32) -> Result<Self> {
        m_tau.monomial_decompose()?;
        let e = e % m_tau.field().h();
        Ok(Isometry { m_tau, e })
    }

    /// `<u, v> = sum u_i v_i`: identity matrix, exponent 0.
    pub fn euclidean(field: &FieldSpec, n: usize) -> Self {
        Isometry {
            m_tau: FqMatrix::identity(field, n),
            e: 0,
        }
    }

    /// The `l`-Galois product `<u, v> = sum u_i v_i^(p^l)`.
    pub fn galois(field: &FieldSpec, n: usize, l: u32) -> Self {
        Isometry {
            m_tau: FqMatrix::identity(field, n),
            e: l % field.h(),
        }
    }

    /// `<u, v> = sum u_i v_i^sqrt(q)`; needs an even extension degree.
    pub fn hermitian(field: &FieldSpec, n: usize) -> Result<Self> {
        let h = field.h();
        if h % 2 != 0 {
            return Err(Error::BadInput(format!(
                "the Hermitian product needs an even extension degree, got h = {}",
                h
            )));
        }
        Ok(Self::galois(field, n, h / 2))
    }

    /// The symplectic product on even length `n = 2m`: block matrix
    /// `[[O, -I], [I, O]]` with exponent 0, giving
    /// `<u, v> = sum_(i<=m) u_i v_(m+i) - u_(m+i) v_i`.
    pub fn symplectic(field: &FieldSpec, n: usize) -> Result<Self> {
        if n % 2 != 0 {
            return Err(Error::BadInput(format!(
                "the symplectic product needs an even length, got n = {}",
                n
            )));
        }
        let m = n / 2;
        let f = field.clone();
        let mat = FqMatrix::from_fn(field, n, n, |i, j| {
            if i < m && j == m + i {
                f.neg(f.one())
            } else if i >= m && j == i - m {
                f.one()
            } else {
                f.zero()
            }
        });
        Ok(Isometry { m_tau: mat, e: 0 })
    }

    pub fn field(&self) -> &FieldSpec {
        self.m_tau.field()
    }

    pub fn len(&self) -> usize {
        self.m_tau.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn exponent(&self) -> u32 {
        self.e
    }

    pub fn matrix(&self) -> &FqMatrix {
        &self.m_tau
    }

    /// `sigma(v) = pi_e(v) M`.
    pub fn apply(&self, v: &[Element]) -> Result<Vec<Element>> {
        let f = self.field();
        let twisted: Vec<Element> = v.iter().map(|&x| f.frobenius(x, self.e)).collect();
        self.m_tau.apply_to_row(&twisted)
    }

    /// Apply the isometry to every row of a matrix: `pi_e(G) M`.
    pub fn apply_matrix(&self, g: &FqMatrix) -> Result<FqMatrix> {
        g.field().ensure_same(self.field())?;
        g.frobenius_map(self.e).mul(&self.m_tau)
    }

    /// `<u, v> = sum_i u_i sigma(v)_i`.
    pub fn inner(&self, u: &[Element], v: &[Element]) -> Result<Element> {
        if u.len() != self.len() {
            return Err(Error::DimensionMismatch {
                context: "twisted inner product",
                left: u.len().to_string(),
                right: self.len().to_string(),
            });
        }
        dot(self.field(), u, &self.apply(v)?)
    }

    /// The partner isometry `(t^{-1} pi_(h-e)(M)^T, h - e mod h)`.
    ///
    /// Dualizing with `self` and then with the partner returns every code
    /// to itself, so self-orthogonality under the partner is equivalent to
    /// dual-containment under `self` of the partner-dual.
    pub fn dual_partner(&self, t: Element) -> Result<Isometry> {
        let f = self.field();
        let t_inv = f.inv(t)?;
        let h = f.h();
        let e = (h - self.e) % h;
        let m = self.m_tau.transpose().frobenius_map(e).scale(t_inv);
        Isometry::new(m, e)
    }

    /// Whether `partner` really satisfies the pairing identity
    /// `pi_(e_partner)(M_self) = t * M_partner^T` with exponents summing
    /// to 0 mod h; returns the witness scalar `t` if so.
    pub fn pairing_scalar(&self, partner: &Isometry) -> Option<Element> {
        let f = self.field();
        if self.len() != partner.len() {
            return None;
        }
        if (self.e + partner.e) % f.h() != 0 {
            return None;
        }
        let lhs = self.m_tau.frobenius_map(partner.e);
        let rhs_t = partner.m_tau.transpose();
        // lhs = t * rhs_t for a single scalar t.
        let mut t = None;
        for i in 0..lhs.rows() {
            for j in 0..lhs.cols() {
                let a = lhs[(i, j)];
                let b = rhs_t[(i, j)];
                match (a.is_zero(), b.is_zero()) {
                    (true, true) => {}
                    (false, false) => {
                        let ratio = f.div(a, b).expect("nonzero divisor");
                        match t {
                            None => t = Some(ratio),
                            Some(prev) if prev == ratio => {}
                            Some(_) => return None,
                        }
                    }
                    _ => return None,
                }
            }
        }
        t
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "e": self.e,
            "m_tau": self.m_tau.to_json(),
        })
    }

    /// Parse either a named kind (`"euclidean"`, `"hermitian"`,
    /// `"symplectic"`, `{"kind": "galois", "e": l}`) for the given length,
    /// or an explicit `{"e": .., "m_tau": ..}` object.
    pub fn from_json(field: &FieldSpec, n: usize, v: &serde_json::Value) -> Result<Isometry> {
        match v {
            serde_json::Value::String(s) => Self::named(field, n, s, None),
            serde_json::Value::Object(map) => {
                if let Some(kind) = map.get("kind") {
                    let kind = kind
                        .as_str()
                        .ok_or_else(|| Error::BadInput("isometry \"kind\" must be a string".into()))?;
                    let e = match map.get("e") {
                        None => None,
                        Some(x) => Some(x.as_u64().ok_or_else(|| {
                            Error::BadInput("isometry \"e\" must be an unsigned integer".into())
                        })? as u32),
                    };
                    return Self::named(field, n, kind, e);
                }
                let m = map
                    .get("m_tau")
                    .ok_or_else(|| Error::BadInput("isometry object needs \"kind\" or \"m_tau\"".into()))?;
                let m_tau = FqMatrix::from_json(field, m)?;
                if m_tau.rows() != n {
                    return Err(Error::DimensionMismatch {
                        context: "isometry matrix size vs code length",
                        left: m_tau.rows().to_string(),
                        right: n.to_string(),
                    });
                }
                let e = match map.get("e") {
                    None => 0,
                    Some(x) => x.as_u64().ok_or_else(|| {
                        Error::BadInput("isometry \"e\" must be an unsigned integer".into())
                    })? as u32,
                };
                Isometry::new(m_tau, e)
            }
            _ => Err(Error::BadInput(
                "expected an isometry name or object".into(),
            )),
        }
    }

    fn named(field: &FieldSpec, n: usize, kind: &str, e: Option<u32>) -> Result<Isometry> {
        match kind {
            "euclidean" => Ok(Self::euclidean(field, n)),
            "hermitian" => Self::hermitian(field, n),
            "symplectic" => Self::symplectic(field, n),
            "galois" => {
                let l = e.ok_or_else(|| {
                    Error::BadInput("a Galois isometry needs the exponent field \"e\"".into())
                })?;
                Ok(Self::galois(field, n, l))
            }
            other => Err(Error::BadInput(format!(
                "unknown isometry kind {:?}; use euclidean, hermitian, galois, or symplectic",
                other
            ))),
        }
    }
}

/// A Kronecker-structured isometry on `F_q^(s n)`: an outer `s x s`
/// monomial factor acting on blocks and an inner length-`n` isometry.
///
/// Flattening gives the plain isometry with matrix `outer (x) inner` and
/// the inner exponent; the block-dual formulas for matrix-product codes
/// require this shape.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KronIsometry {
    outer: FqMatrix,
    inner: Isometry,
}

impl KronIsometry {
    pub fn new(outer: FqMatrix, inner: Isometry) -> Result<Self> {
        outer.field().ensure_same(inner.field())?;
        outer.monomial_decompose()?;
        Ok(KronIsometry { outer, inner })
    }

    pub fn outer(&self) -> &FqMatrix {
        &self.outer
    }

    pub fn inner(&self) -> &Isometry {
        &self.inner
    }

    pub fn blocks(&self) -> usize {
        self.outer.rows()
    }

    /// The plain isometry on length `s * n`.
    pub fn flatten(&self) -> Result<Isometry> {
        let m = self.outer.kronecker(self.inner.matrix())?;
        Isometry::new(m, self.inner.exponent())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn f(p: u64, h: u32) -> FieldSpec {
        FieldSpec::new(p, h, None).unwrap()
    }

    fn random_vec(field: &FieldSpec, n: usize, rng: &mut ChaCha8Rng) -> Vec<Element> {
        let els: Vec<Element> = field.elements().collect();
        (0..n).map(|_| els[rng.random_range(0..els.len())]).collect()
    }

    #[test]
    fn euclidean_hermitian_and_galois_match_direct_formulas() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let field = f(3, 2);
        let n = 5;
        let euc = Isometry::euclidean(&field, n);
        let her = Isometry::hermitian(&field, n).unwrap();
        let gal = Isometry::galois(&field, n, 1);
        for _ in 0..50 {
            let u = random_vec(&field, n, &mut rng);
            let v = random_vec(&field, n, &mut rng);
            let mut e_sum = field.zero();
            let mut h_sum = field.zero();
            for i in 0..n {
                e_sum = field.add(e_sum, field.mul(u[i], v[i]));
                h_sum = field.add(h_sum, field.mul(u[i], field.pow(v[i], 3).unwrap()));
            }
            assert_eq!(euc.inner(&u, &v).unwrap(), e_sum);
            assert_eq!(her.inner(&u, &v).unwrap(), h_sum);
            // Over F_9 the Hermitian product is the 1-Galois product.
            assert_eq!(gal.inner(&u, &v).unwrap(), h_sum);
        }
    }

    #[test]
    fn symplectic_product_is_the_standard_alternating_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        let field = f(3, 1);
        let n = 4;
        let sym = Isometry::symplectic(&field, n).unwrap();
        // <e1, e3> = +1 under the block convention [[O, -I], [I, O]].
        let e1 = [field.one(), field.zero(), field.zero(), field.zero()];
        let e3 = [field.zero(), field.zero(), field.one(), field.zero()];
        assert_eq!(sym.inner(&e1, &e3).unwrap(), field.one());
        assert_eq!(sym.inner(&e3, &e1).unwrap(), field.neg(field.one()));
        for _ in 0..50 {
            let u = random_vec(&field, n, &mut rng);
            let v = random_vec(&field, n, &mut rng);
            // Direct formula: sum u_i v_(m+i) - u_(m+i) v_i.
            let m = n / 2;
            let mut direct = field.zero();
            for i in 0..m {
                direct = field.add(direct, field.mul(u[i], v[m + i]));
                direct = field.sub(direct, field.mul(u[m + i], v[i]));
            }
            assert_eq!(sym.inner(&u, &v).unwrap(), direct);
            // Alternating: <u, u> = 0 and <u, v> = -<v, u>.
            assert!(sym.inner(&u, &u).unwrap().is_zero());
            assert_eq!(sym.inner(&u, &v).unwrap(), field.neg(sym.inner(&v, &u).unwrap()));
        }
        assert!(Isometry::symplectic(&field, 3).is_err());
        assert!(Isometry::hermitian(&field, 2).is_err());
    }

    #[test]
    fn apply_is_semilinear() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let field = f(2, 4);
        let els: Vec<Element> = field.elements().collect();
        let m = FqMatrix::permutation(&field, &[2, 0, 1]).unwrap();
        let d = FqMatrix::diagonal(&field, &[field.omega_pow(3), field.one(), field.omega_pow(7)]);
        let iso = Isometry::new(d.mul(&m).unwrap(), 2).unwrap();
        for _ in 0..40 {
            let u = random_vec(&field, 3, &mut rng);
            let v = random_vec(&field, 3, &mut rng);
            let a = els[rng.random_range(0..els.len())];
            let au_plus_v: Vec<Element> = (0..3)
                .map(|i| field.add(field.mul(a, u[i]), v[i]))
                .collect();
            let lhs = iso.apply(&au_plus_v).unwrap();
            let fu = iso.apply(&u).unwrap();
            let fv = iso.apply(&v).unwrap();
            let a_tw = field.frobenius(a, 2);
            let rhs: Vec<Element> = (0..3)
                .map(|i| field.add(field.mul(a_tw, fu[i]), fv[i]))
                .collect();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn dual_partner_reproduces_the_paired_monomial_table() {
        // Two worked 4x4 pairings over F_4 with exponent 1; the partner of
        // (M, 1) must be (t^{-1} pi_1(M)^T, 1).
        let field = f(2, 2);
        let w = field.omega();
        let w2 = field.omega_pow(2);
        let o = field.zero();
        let i = field.one();
        let cases = [
            (
                vec![
                    vec![i, o, o, o],
                    vec![o, o, o, w2],
                    vec![o, o, i, o],
                    vec![o, w, o, o],
                ],
                vec![
                    vec![i, o, o, o],
                    vec![o, o, o, w2],
                    vec![o, o, i, o],
                    vec![o, w, o, o],
                ],
            ),
            (
                vec![
                    vec![w2, o, o, o],
                    vec![o, o, i, o],
                    vec![o, w, o, o],
                    vec![o, o, o, w2],
                ],
                vec![
                    vec![w, o, o, o],
                    vec![o, o, w2, o],
                    vec![o, i, o, o],
                    vec![o, o, o, w],
                ],
            ),
        ];
        for (m_in, m_expected_t1) in cases {
            let m_in = FqMatrix::from_rows(&field, m_in).unwrap();
            let m_expected = FqMatrix::from_rows(&field, m_expected_t1).unwrap();
            let sigma_prime = Isometry::new(m_in, 1).unwrap();
            for t in [field.one(), w, w2] {
                let partner = sigma_prime.dual_partner(t).unwrap();
                assert_eq!(partner.exponent(), 1);
                assert_eq!(
                    *partner.matrix(),
                    m_expected.scale(field.inv(t).unwrap()),
                );
                // The pairing identity holds with witness t.
                assert_eq!(sigma_prime.pairing_scalar(&partner), Some(t));
            }
        }
    }

    #[test]
    fn pairing_scalar_on_named_products() {
        // Euclidean and Hermitian products are their own partners with
        // t = 1; the symplectic product pairs with itself at t = -1.
        let f9 = f(3, 2);
        let euc = Isometry::euclidean(&f9, 4);
        assert_eq!(euc.pairing_scalar(&euc), Some(f9.one()));
        let her = Isometry::hermitian(&f9, 4).unwrap();
        assert_eq!(her.pairing_scalar(&her), Some(f9.one()));
        let sym = Isometry::symplectic(&f9, 4).unwrap();
        assert_eq!(sym.pairing_scalar(&sym), Some(f9.neg(f9.one())));
        assert_eq!(euc.dual_partner(f9.one()).unwrap(), euc);
        assert_eq!(her.dual_partner(f9.one()).unwrap(), her);
        assert_eq!(sym.dual_partner(f9.neg(f9.one())).unwrap(), sym);
        // Mismatched exponents pair with nothing.
        assert_eq!(euc.pairing_scalar(&her), None);
    }

    #[test]
    fn kron_flatten_matches_the_kronecker_product() {
        let field = f(2, 2);
        let outer = FqMatrix::from_rows(
            &field,
            vec![
                vec![field.zero(), field.omega()],
                vec![field.one(), field.zero()],
            ],
        )
        .unwrap();
        let inner_m = FqMatrix::diagonal(&field, &[field.one(), field.omega_pow(2)]);
        let inner = Isometry::new(inner_m.clone(), 1).unwrap();
        let kron = KronIsometry::new(outer.clone(), inner).unwrap();
        let flat = kron.flatten().unwrap();
        assert_eq!(flat.exponent(), 1);
        assert_eq!(*flat.matrix(), outer.kronecker(&inner_m).unwrap());
        assert_eq!(kron.blocks(), 2);
    }

    #[test]
    fn json_roundtrip_and_named_kinds() {
        let field = f(3, 2);
        let her = Isometry::hermitian(&field, 3).unwrap();
        let parsed = Isometry::from_json(&field, 3, &serde_json::json!("hermitian")).unwrap();
        assert_eq!(parsed, her);
        let parsed =
            Isometry::from_json(&field, 3, &serde_json::json!({"kind": "galois", "e": 1})).unwrap();
        assert_eq!(parsed, her);
        let explicit = her.to_json();
        let parsed = Isometry::from_json(&field, 3, &explicit).unwrap();
        assert_eq!(parsed, her);
        assert!(Isometry::from_json(&field, 3, &serde_json::json!("sideways")).is_err());
        assert!(Isometry::from_json(&field, 2, &explicit).is_err());
        // Non-monomial matrices are rejected at construction.
        let ones = FqMatrix::from_fn(&field, 2, 2, |_, _| field.one());
        assert!(matches!(Isometry::new(ones, 0), Err(Error::NotMonomial(_, _))));
    }
}
