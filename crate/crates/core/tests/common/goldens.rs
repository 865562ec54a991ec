//! Hierarchy members and Lenard polynomials in closed form.

use ncpii_core::ncalg::{GaussianRational, NcPoly};

pub fn w(k: u32) -> NcPoly {
    NcPoly::w(k)
}

pub fn u(k: u32) -> NcPoly {
    NcPoly::u(k)
}

pub fn pw(p: &NcPoly, e: u32) -> NcPoly {
    (0..e).fold(NcPoly::one(), |acc, _| &acc * p)
}

pub fn prod(fs: &[&NcPoly]) -> NcPoly {
    fs.iter().fold(NcPoly::one(), |acc, f| &acc * *f)
}

pub fn ac(a: &NcPoly, b: &NcPoly) -> NcPoly {
    NcPoly::anticommutator(a, b)
}

pub fn sum(terms: &[(i64, NcPoly)]) -> NcPoly {
    terms
        .iter()
        .fold(NcPoly::zero(), |acc, (c, p)| &acc + &p.scale_int(*c))
}

pub fn sw() -> NcPoly {
    ac(&NcPoly::s(), &w(0))
}

/// `L_n[U]` for `n = 0..=3`.
pub fn lenard_golden(n: usize) -> NcPoly {
    match n {
        0 => NcPoly::constant(GaussianRational::ratio(1, 2)),
        1 => u(0),
        2 => sum(&[(1, u(2)), (3, pw(&u(0), 2))]),
        3 => sum(&[
            (1, u(4)),
            (5, ac(&u(0), &u(2))),
            (5, pw(&u(1), 2)),
            (10, pw(&u(0), 3)),
        ]),
        _ => panic!("no reference form for n = {n}"),
    }
}

/// Right-hand side of `W_{2nS} = ...` for `n = 1..=3`.
pub fn member_golden(n: usize) -> NcPoly {
    match n {
        1 => sum(&[(2, pw(&w(0), 3)), (4, sw())]),
        2 => second_member(),
        3 => third_member(),
        _ => panic!("no reference form for n = {n}"),
    }
}

fn second_member() -> NcPoly {
    let ww = pw(&w(0), 2);
    let ws2 = pw(&w(1), 2);
    sum(&[
        (-6, pw(&w(0), 5)),
        (4, ac(&ww, &w(2))),
        (2, prod(&[&w(0), &w(2), &w(0)])),
        (2, ac(&ws2, &w(0))),
        (6, prod(&[&w(1), &w(0), &w(1)])),
        (-16, sw()),
    ])
}

fn third_member() -> NcPoly {
    let w0 = w(0);
    let (w1, w2, w3, w4) = (w(1), w(2), w(3), w(4));
    let ww = pw(&w0, 2);
    let ws2 = pw(&w1, 2);
    sum(&[
        (20, pw(&w0, 7)),
        (-15, ac(&w2, &pw(&w0, 4))),
        (-20, prod(&[&ww, &w2, &ww])),
        (-10, ac(&prod(&[&w0, &w2, &w0]), &ww)),
        (-10, ac(&ws2, &pw(&w0, 3))),
        (-15, ac(&prod(&[&w0, &ws2, &w0]), &w0)),
        (-20, prod(&[&w1, &pw(&w0, 3), &w1])),
        (-25, ac(&prod(&[&w1, &w0, &w1]), &ww)),
        (-5, ac(&prod(&[&w1, &ww, &w1]), &w0)),
        (-10, prod(&[&w0, &w1, &w0, &w1, &w0])),
        (6, ac(&w4, &ww)),
        (2, prod(&[&w0, &w4, &w0])),
        (4, &prod(&[&w1, &w3, &w0]) + &prod(&[&w0, &w3, &w1])),
        (9, &prod(&[&w0, &w1, &w3]) + &prod(&[&w3, &w1, &w0])),
        (15, &prod(&[&w1, &w0, &w3]) + &prod(&[&w3, &w0, &w1])),
        (25, ac(&w2, &ws2)),
        (20, prod(&[&w1, &w2, &w1])),
        (11, ac(&pw(&w2, 2), &w0)),
        (20, prod(&[&w2, &w0, &w2])),
        (64, sw()),
    ])
}
