//! Cartesian left additive structure: products, sums, the structural maps
//! and the simple slice.

use super::gen::{Generate, Kind};
use super::runner::{build, check_all, Law};
use crate::category::{Model, Slice, Structure};
use crate::shape::Shape;

fn prod(a: &Shape, b: &Shape) -> Shape {
    Shape::prod(a.clone(), b.clone())
}

pub fn structure_laws<'a, M: Generate + Clone + 'a>() -> Vec<Law<'a, M>> {
    vec![
        Law::new(
            "PROD",
            |m: &M, rng| {
                build(m, rng, |b| {
                    let s = b.shapes(3, 5);
                    b.mor(&s[0], &s[1])?;
                    b.mor(&s[0], &s[2])?;
                    b.mor(&s[0], &prod(&s[1], &s[2]))?;
                    Ok(())
                })
            },
            |m, inst| {
                let s = &inst.shapes;
                let (f, g, h) = (inst.mor(0), inst.mor(1), inst.mor(2));
                let fg = m.pair(f, g)?;
                let p0 = m.proj0(&s[1], &s[2])?;
                let p1 = m.proj1(&s[1], &s[2])?;
                let split = m.pair(&m.compose(h, &p0)?, &m.compose(h, &p1)?)?;
                check_all(
                    m,
                    &[
                        ("<f,g>p0 = f", m.compose(&fg, &p0)?, f.clone()),
                        ("<f,g>p1 = g", m.compose(&fg, &p1)?, g.clone()),
                        ("<hp0,hp1> = h", split, h.clone()),
                    ],
                )
            },
        ),
        Law::new(
            "CAT",
            |m: &M, rng| {
                build(m, rng, |b| {
                    let s = b.shapes(4, 6);
                    b.mor(&s[0], &s[1])?;
                    b.mor(&s[1], &s[2])?;
                    b.mor(&s[2], &s[3])?;
                    Ok(())
                })
            },
            |m, inst| {
                let (f, g, h) = (inst.mor(0), inst.mor(1), inst.mor(2));
                let (a, b) = (m.dom(f), m.cod(f));
                check_all(
                    m,
                    &[
                        (
                            "(fg)h = f(gh)",
                            m.compose(&m.compose(f, g)?, h)?,
                            m.compose(f, &m.compose(g, h)?)?,
                        ),
                        ("1f = f", m.compose(&m.identity(&a)?, f)?, f.clone()),
                        ("f1 = f", m.compose(f, &m.identity(&b)?)?, f.clone()),
                    ],
                )
            },
        ),
        Law::new(
            "LADD",
            |m: &M, rng| {
                build(m, rng, |b| {
                    let s = b.shapes(3, 6);
                    b.mor(&s[0], &s[1])?;
                    b.mor(&s[1], &s[2])?;
                    b.mor(&s[1], &s[2])?;
                    Ok(())
                })
            },
            |m, inst| {
                let (f, g, h) = (inst.mor(0), inst.mor(1), inst.mor(2));
                let s = &inst.shapes;
                check_all(
                    m,
                    &[
                        (
                            "f(g+h) = fg+fh",
                            m.compose(f, &m.add(g, h)?)?,
                            m.add(&m.compose(f, g)?, &m.compose(f, h)?)?,
                        ),
                        (
                            "f0 = 0",
                            m.compose(f, &m.zero(&s[1], &s[2])?)?,
                            m.zero(&s[0], &s[2])?,
                        ),
                    ],
                )
            },
        ),
        Law::new(
            "MONOID",
            |m: &M, rng| {
                build(m, rng, |b| {
                    let s = b.shapes(2, 4);
                    for _ in 0..3 {
                        b.mor(&s[0], &s[1])?;
                    }
                    Ok(())
                })
            },
            |m, inst| {
                let (f, g, h) = (inst.mor(0), inst.mor(1), inst.mor(2));
                let s = &inst.shapes;
                check_all(
                    m,
                    &[
                        ("f+g = g+f", m.add(f, g)?, m.add(g, f)?),
                        (
                            "(f+g)+h = f+(g+h)",
                            m.add(&m.add(f, g)?, h)?,
                            m.add(f, &m.add(g, h)?)?,
                        ),
                        ("f+0 = f", m.add(f, &m.zero(&s[0], &s[1])?)?, f.clone()),
                    ],
                )
            },
        ),
        Law::new(
            "PROJADD",
            |m: &M, rng| {
                build(m, rng, |b| {
                    b.shapes(2, 3);
                    Ok(())
                })
            },
            |m, inst| {
                let (a, b) = (inst.shape(0), inst.shape(1));
                let ab = prod(a, b);
                let mut eqs = Vec::new();
                for p in [m.proj0(a, b)?, m.proj1(a, b)?] {
                    let lhs = m.compose(&m.oplus(&ab)?, &p)?;
                    let rhs = m.add(
                        &m.compose(&m.proj0(&ab, &ab)?, &p)?,
                        &m.compose(&m.proj1(&ab, &ab)?, &p)?,
                    )?;
                    eqs.push(("(+)p = p0p + p1p", lhs, rhs));
                    let cod = m.cod(&p);
                    eqs.push((
                        "0p = 0",
                        m.compose(&m.zero(&ab, &ab)?, &p)?,
                        m.zero(&ab, &cod)?,
                    ));
                }
                check_all(m, &eqs)
            },
        ),
        Law::new(
            "OPLUS",
            |m: &M, rng| {
                build(m, rng, |b| {
                    b.shapes(2, 3);
                    Ok(())
                })
            },
            |m, inst| {
                let (a, b) = (inst.shape(0), inst.shape(1));
                let ab = prod(a, b);
                let plus = m.oplus(a)?;
                let one = m.identity(a)?;
                let plus2 = m.times(&plus, &plus)?;
                let c = m.interchange(a, a, a, a)?;
                check_all(
                    m,
                    &[
                        ("<0,1>(+) = 1", m.compose(&m.zero_one(a, a)?, &plus)?, one.clone()),
                        ("<1,0>(+) = 1", m.compose(&m.one_zero(a, a)?, &plus)?, one.clone()),
                        ("t(+) = (+)", m.compose(&m.sym(a, a)?, &plus)?, plus.clone()),
                        (
                            "c((+)x(+))(+) = ((+)x(+))(+)",
                            m.chain(&[&c, &plus2, &plus])?,
                            m.compose(&plus2, &plus)?,
                        ),
                        (
                            "(+)_AxB = c((+)_A x (+)_B)",
                            m.oplus(&ab)?,
                            m.compose(
                                &m.interchange(a, b, a, b)?,
                                &m.times(&plus, &m.oplus(b)?)?,
                            )?,
                        ),
                        (
                            "l(+)_AxB = 1",
                            m.compose(&m.lift(a, b, a, b)?, &m.oplus(&ab)?)?,
                            m.identity(&ab)?,
                        ),
                        (
                            "l((+)x(+)) = 1",
                            m.compose(&m.lift(a, a, a, a)?, &plus2)?,
                            m.identity(&a.doubled())?,
                        ),
                    ],
                )
            },
        ),
        Law::new(
            "ISO",
            |m: &M, rng| {
                build(m, rng, |b| {
                    b.shapes(4, 4);
                    Ok(())
                })
            },
            |m, inst| {
                let s = &inst.shapes;
                let (a, b, c, d) = (&s[0], &s[1], &s[2], &s[3]);
                let one_abc = m.identity(&prod(c, &prod(a, b)))?;
                let alpha = m.alpha(c, a, b)?;
                let beta = m.beta(c, a, b)?;
                let swapped = m.compose(
                    &m.times(&m.identity(c)?, &m.sym(a, b)?)?,
                    &m.alpha(c, b, a)?,
                )?;
                check_all(
                    m,
                    &[
                        (
                            "tt = 1",
                            m.compose(&m.sym(a, b)?, &m.sym(b, a)?)?,
                            m.identity(&prod(a, b))?,
                        ),
                        (
                            "cc = 1",
                            m.compose(&m.interchange(a, b, c, d)?, &m.interchange(a, c, b, d)?)?,
                            m.identity(&prod(&prod(a, b), &prod(c, d)))?,
                        ),
                        ("a a^-1 = 1", m.compose(&alpha, &m.alpha_inv(c, a, b)?)?, one_abc.clone()),
                        (
                            "a^-1 a = 1",
                            m.compose(&m.alpha_inv(c, a, b)?, &alpha)?,
                            m.identity(&prod(&prod(c, a), b))?,
                        ),
                        ("b b^-1 = 1", m.compose(&beta, &m.beta_inv(c, a, b)?)?, one_abc),
                        (
                            "b^-1 b = 1",
                            m.compose(&m.beta_inv(c, a, b)?, &beta)?,
                            m.identity(&prod(&prod(c, b), a))?,
                        ),
                        ("b = (1xt)a", beta.clone(), swapped),
                    ],
                )
            },
        ),
        Law::new(
            "ELLNAT",
            |m: &M, rng| {
                build(m, rng, |b| {
                    let s = b.shapes(8, 8);
                    b.mor(&s[0], &s[4])?;
                    b.mor_kind(&s[1], &s[5], Kind::Reduced)?;
                    b.mor_kind(&s[2], &s[6], Kind::Reduced)?;
                    b.mor(&s[3], &s[7])?;
                    Ok(())
                })
            },
            |m, inst| {
                let s = &inst.shapes;
                let (f, g, h, k) = (inst.mor(0), inst.mor(1), inst.mor(2), inst.mor(3));
                let lhs = m.compose(&m.times(f, k)?, &m.lift(&s[4], &s[5], &s[6], &s[7])?)?;
                let rhs = m.compose(
                    &m.lift(&s[0], &s[1], &s[2], &s[3])?,
                    &m.times(&m.times(f, g)?, &m.times(h, k)?)?,
                )?;
                check_all(m, &[("(fxk)l = l((fxg)x(hxk))", lhs, rhs)])
            },
        ),
        Law::new(
            "SLICE",
            |m: &M, rng| {
                build(m, rng, |b| {
                    let s = b.shapes(5, 6);
                    let c = Some(&s[0]);
                    b.mor_of(c, &s[1], &s[2], Kind::Any)?;
                    b.mor_of(c, &s[2], &s[3], Kind::Any)?;
                    b.mor_of(c, &s[3], &s[4], Kind::Any)?;
                    Ok(())
                })
            },
            |m, inst| {
                let s = &inst.shapes;
                let slice = Slice::new(m.clone(), s[0].clone());
                let (f, g, h) = (inst.mor(0), inst.mor(1), inst.mor(2));
                let id_a = slice.identity(&s[1])?;
                let id_b = slice.identity(&s[2])?;
                let gh = slice.compose(g, h)?;
                check_all(
                    m,
                    &[
                        (
                            "(fg)h = f(gh) in the slice",
                            slice.compose(&slice.compose(f, g)?, h)?,
                            slice.compose(f, &gh)?,
                        ),
                        ("1f = f in the slice", slice.compose(&id_a, f)?, f.clone()),
                        ("f1 = f in the slice", slice.compose(f, &id_b)?, f.clone()),
                    ],
                )
            },
        ),
        Law::new(
            "SUBST",
            |m: &M, rng| {
                build(m, rng, |b| {
                    let s = b.shapes(5, 6);
                    let (c2, c1, c, a, bb) = (&s[0], &s[1], &s[2], &s[3], &s[4]);
                    b.mor(c2, c1)?;
                    b.mor(c1, c)?;
                    b.mor(&prod(c, a), bb)?;
                    Ok(())
                })
            },
            |m, inst| {
                let s = &inst.shapes;
                let (h, k, f) = (inst.mor(0), inst.mor(1), inst.mor(2));
                let (c2, c, a) = (&s[0], &s[2], &s[3]);
                check_all(
                    m,
                    &[
                        ("1*(f) = f", m.substitute(&m.identity(c)?, f)?, f.clone()),
                        (
                            "(hk)*(f) = h*(k*(f))",
                            m.substitute(&m.compose(h, k)?, f)?,
                            m.substitute(h, &m.substitute(k, f)?)?,
                        ),
                        (
                            "(hk)*(p1) = p1",
                            m.substitute(&m.compose(h, k)?, &m.proj1(c, a)?)?,
                            m.proj1(c2, a)?,
                        ),
                    ],
                )
            },
        ),
        Law::new(
            "CLID",
            |m: &M, rng| {
                build(m, rng, |b| {
                    b.shapes(4, 4);
                    Ok(())
                })
            },
            |m, inst| {
                let s = &inst.shapes;
                let (lhs, rhs) = lift_interchange_identity(m, &s[0], &s[1], &s[2], &s[3])?;
                check_all(m, &[("cl(cxc)(lxl)c = l(cxc)(lxl)((cxc)x(cxc))", lhs, rhs)])
            },
        ),
    ]
}

/// Both sides of `cℓ(c×c)(ℓ×ℓ)c = ℓ(c×c)(ℓ×ℓ)((c×c)×(c×c))`, as maps
/// `X → (X×X)×(X×X)` with `X = (C×A)×(B×D)`.
pub fn lift_interchange_identity<M: Structure + ?Sized>(
    m: &M,
    c: &Shape,
    a: &Shape,
    b: &Shape,
    d: &Shape,
) -> crate::error::Result<(M::Mor, M::Mor)> {
    let (ca, bd, cb, ad) = (prod(c, a), prod(b, d), prod(c, b), prod(a, d));
    let x = prod(&ca, &bd);
    // X → Y = (C×B)×(A×D) and back
    let c_xy = m.interchange(c, a, b, d)?;
    let c_yx = m.interchange(c, b, a, d)?;
    let l_x = m.lift(&ca, &bd, &ca, &bd)?;
    let l_y = m.lift(&cb, &ad, &cb, &ad)?;
    let c_outer = m.interchange(&x, &x, &x, &x)?;

    let lhs = m.chain(&[
        &c_xy,
        &l_y,
        &m.times(&c_yx, &c_yx)?,
        &m.times(&l_x, &l_x)?,
        &c_outer,
    ])?;
    let cc = m.times(&c_yx, &c_yx)?;
    let rhs = m.chain(&[
        &l_x,
        &m.times(&c_xy, &c_xy)?,
        &m.times(&l_y, &l_y)?,
        &m.times(&cc, &cc)?,
    ])?;
    Ok((lhs, rhs))
}
