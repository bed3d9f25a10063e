//! Named fans: `projective(d)`, `product(d1,...)`, `hirzebruch(n)`,
//! `delpezzo(k)`, `weighted_projective(w0,...)`, `blowup(NAME,[v...])`,
//! `fatal_example`, `zero_nef_surface`, `projective_plane_mod3`.

use crate::error::{Error, Result};
use crate::exactlin::{hermite_rows, to_i64, IntMatrix};
use crate::fan::{subsets, Fan};

/// Catalog names listed by `catalog --list`.
pub fn standard_names() -> Vec<String> {
    let mut names: Vec<String> = (1..=4).map(|d| format!("projective({d})")).collect();
    names.extend(["product(1,1)", "product(1,2)", "product(1,1,1)", "product(2,2)", "product(1,3)"].map(String::from));
    names.extend((0..=6).map(|n| format!("hirzebruch({n})")));
    names.extend((1..=3).map(|k| format!("delpezzo({k})")));
    names.extend(
        [
            "blowup(projective(3),[1,1,0])",
            "fatal_example",
            "zero_nef_surface",
            "weighted_projective(1,1,2)",
            "weighted_projective(1,2,3)",
            "weighted_projective(1,1,1,2)",
            "projective_plane_mod3",
        ]
        .map(String::from),
    );
    names
}

pub fn projective(d: usize) -> Fan {
    let mut rays: Vec<Vec<i64>> = (0..d).map(|i| (0..d).map(|j| i64::from(i == j)).collect()).collect();
    rays.push(vec![-1; d]);
    Fan::new(d, rays, subsets(d + 1, d)).expect("valid").named(format!("projective({d})"))
}

pub fn product(factors: &[&Fan]) -> Fan {
    let dim: usize = factors.iter().map(|f| f.dim).sum();
    let mut rays = Vec::new();
    let mut offsets = Vec::new();
    let mut shift = 0;
    for f in factors {
        offsets.push(rays.len());
        for r in &f.rays {
            let mut v = vec![0; dim];
            v[shift..shift + f.dim].copy_from_slice(r);
            rays.push(v);
        }
        shift += f.dim;
    }
    let mut cones: Vec<Vec<usize>> = vec![Vec::new()];
    for (f, off) in factors.iter().zip(&offsets) {
        cones = cones
            .into_iter()
            .flat_map(|c| {
                f.max_cones.iter().map(move |fc| {
                    let mut n = c.clone();
                    n.extend(fc.iter().map(|i| i + off));
                    n
                })
            })
            .collect();
    }
    Fan::new(dim, rays, cones).expect("valid")
}

pub fn hirzebruch(n: i64) -> Fan {
    Fan::new(2, vec![vec![1, 0], vec![0, 1], vec![-1, n], vec![0, -1]], vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]])
        .expect("valid")
        .named(format!("hirzebruch({n})"))
}

/// Blow-up of the projective plane at `k <= 3` torus-fixed points.
pub fn del_pezzo(k: usize) -> Result<Fan> {
    if k > 3 {
        return Err(Error::UnknownName(format!("delpezzo({k})")));
    }
    let mut fan = projective(2);
    for v in [[1, 1], [-1, 0], [0, -1]].iter().take(k) {
        fan = fan.star_subdivision(v)?;
    }
    Ok(fan.named(format!("delpezzo({k})")))
}

/// The projective 3-space subdivided at `3 e_2 + 2 e_3`.
pub fn fatal_example() -> Fan {
    projective(3).star_subdivision(&[0, 3, 2]).expect("valid").named("fatal_example")
}

pub fn zero_nef_surface() -> Fan {
    let rays = vec![vec![1, 0], vec![1, 1], vec![0, 1], vec![-1, 0], vec![-1, -1], vec![0, -1], vec![1, -1]];
    let cones = (0..7).map(|i| { let mut c = vec![i, (i + 1) % 7]; c.sort_unstable(); c }).collect();
    Fan::new(2, rays, cones).expect("valid").named("zero_nef_surface")
}

pub fn projective_plane_mod3() -> Fan {
    Fan::new(2, vec![vec![1, 1], vec![1, -2], vec![-2, 1]], vec![vec![0, 1], vec![1, 2], vec![0, 2]])
        .expect("valid")
        .named("projective_plane_mod3")
}

/// Rays are the images of the standard basis in `Z^{d+1} / Z w`.
pub fn weighted_projective(weights: &[i64]) -> Result<Fan> {
    let n = weights.len();
    if n < 2 || weights.iter().any(|&w| w <= 0) {
        return Err(Error::UnknownName(format!("weighted_projective{weights:?}")));
    }
    let col = IntMatrix::from_i64(&weights.iter().map(|&w| vec![w]).collect::<Vec<_>>());
    let (h, g) = hermite_rows(&col);
    if *h.get(0, 0) != 1.into() {
        return Err(Error::UnknownName(format!("weights {weights:?} are not coprime")));
    }
    let rays = (0..n)
        .map(|i| (1..n).map(|k| to_i64(g.get(k, i))).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let name = format!("weighted_projective({})", weights.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(","));
    Ok(Fan::checked(n - 1, rays, subsets(n, n - 1))?.named(name))
}

#[derive(Debug, Clone)]
enum Arg {
    Int(i64),
    List(Vec<i64>),
    Name(String),
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip();
        self.s.get(self.pos).copied()
    }

    fn int(&mut self) -> Option<i64> {
        self.skip();
        let start = self.pos;
        if self.s.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos]).ok()?.parse().ok()
    }

    /// A name with an optional argument list, returned as source text.
    fn name(&mut self) -> Option<String> {
        self.skip();
        let start = self.pos;
        while self.pos < self.s.len() && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_') {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        if self.peek() == Some(b'(') {
            let mut depth = 0;
            while self.pos < self.s.len() {
                match self.s[self.pos] {
                    b'(' => depth += 1,
                    b')' => {
                        depth -= 1;
                        if depth == 0 {
                            self.pos += 1;
                            break;
                        }
                    }
                    _ => {}
                }
                self.pos += 1;
            }
            if depth != 0 {
                return None;
            }
        }
        Some(std::str::from_utf8(&self.s[start..self.pos]).ok()?.trim().to_string())
    }

    fn arg(&mut self) -> Option<Arg> {
        match self.peek()? {
            b'[' => {
                self.pos += 1;
                let mut v = Vec::new();
                if self.peek()? == b']' {
                    self.pos += 1;
                    return Some(Arg::List(v));
                }
                loop {
                    v.push(self.int()?);
                    match self.peek()? {
                        b',' => self.pos += 1,
                        b']' => {
                            self.pos += 1;
                            return Some(Arg::List(v));
                        }
                        _ => return None,
                    }
                }
            }
            c if c == b'-' || c.is_ascii_digit() => self.int().map(Arg::Int),
            _ => self.name().map(Arg::Name),
        }
    }
}

fn parse(name: &str) -> Option<(String, Vec<Arg>)> {
    let mut p = Parser { s: name.as_bytes(), pos: 0 };
    p.skip();
    let start = p.pos;
    while p.pos < p.s.len() && (p.s[p.pos].is_ascii_alphanumeric() || p.s[p.pos] == b'_') {
        p.pos += 1;
    }
    let head = name[start..p.pos].to_string();
    let mut args = Vec::new();
    if p.peek() == Some(b'(') {
        p.pos += 1;
        if p.peek()? == b')' {
            p.pos += 1;
        } else {
            loop {
                args.push(p.arg()?);
                match p.peek()? {
                    b',' => p.pos += 1,
                    b')' => {
                        p.pos += 1;
                        break;
                    }
                    _ => return None,
                }
            }
        }
    }
    (p.peek().is_none() && !head.is_empty()).then_some((head, args))
}

fn ints(args: &[Arg]) -> Option<Vec<i64>> {
    args.iter().map(|a| if let Arg::Int(v) = a { Some(*v) } else { None }).collect()
}

/// Looks up a catalog entry by name.
pub fn catalog(name: &str) -> Result<Fan> {
    let unknown = || Error::UnknownName(name.to_string());
    let (head, args) = parse(name).ok_or_else(unknown)?;
    let fan = match head.as_str() {
        "projective" => match ints(&args).as_deref() {
            Some(&[d]) if (1..=8).contains(&d) => projective(d as usize),
            _ => return Err(unknown()),
        },
        "product" => {
            let dims = ints(&args).filter(|d| !d.is_empty() && d.iter().all(|&x| (1..=8).contains(&x))).ok_or_else(unknown)?;
            let parts: Vec<Fan> = dims.iter().map(|&d| projective(d as usize)).collect();
            product(&parts.iter().collect::<Vec<_>>())
        }
        "hirzebruch" => match ints(&args).as_deref() {
            Some(&[n]) if n >= 0 => hirzebruch(n),
            _ => return Err(unknown()),
        },
        "delpezzo" => match ints(&args).as_deref() {
            Some(&[k]) if (0..=3).contains(&k) => del_pezzo(k as usize)?,
            _ => return Err(unknown()),
        },
        "weighted_projective" => weighted_projective(&ints(&args).ok_or_else(unknown)?)?,
        "fatal_example" if args.is_empty() => fatal_example(),
        "zero_nef_surface" if args.is_empty() => zero_nef_surface(),
        "projective_plane_mod3" if args.is_empty() => projective_plane_mod3(),
        "blowup" => match args.as_slice() {
            [Arg::Name(base), Arg::List(v)] => catalog(base)?.star_subdivision(v)?,
            _ => return Err(unknown()),
        },
        _ => return Err(unknown()),
    };
    Ok(fan.named(name.replace(' ', "")))
}
