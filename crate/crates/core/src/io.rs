//! JSON interchange.
//!
//! Scalars are `[re, im]` (complex) or `{"N": n, "coeffs": [[num, den], ...]}`
//! (cyclotomic, `phi(N)` power-basis coefficients; integers too large for 64
//! bits are written as decimal strings). Points and lines are arrays of three
//! scalars. A net is
//! `{"field": "complex" | {"cyclotomic": N}, "classes": [[line, ...], ...], "points": [point, ...]}`
//! with `points` optional.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::cubic::Cubic;
use crate::error::{Error, Result};
use crate::field::{ApproxComplex, Backend, CyclotomicField, Field};
use crate::geom::{Line, Point};
use crate::net::Net;

fn parse_err(path: &str, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("{path}: {msg}"))
}

/// Fields whose elements have a JSON encoding.
pub trait JsonField: Field {
    fn scalar_to_json(&self, a: &Self::Elem) -> Value;
    fn scalar_from_json(&self, v: &Value, path: &str) -> Result<Self::Elem>;
}

impl JsonField for ApproxComplex {
    fn scalar_to_json(&self, a: &Complex64) -> Value {
        json!([a.re, a.im])
    }

    fn scalar_from_json(&self, v: &Value, path: &str) -> Result<Complex64> {
        let num = |x: &Value| x.as_f64().ok_or_else(|| parse_err(path, "expected a number"));
        match v {
            Value::Array(a) if a.len() == 2 => Ok(Complex64::new(num(&a[0])?, num(&a[1])?)),
            Value::Number(_) => Ok(Complex64::new(num(v)?, 0.0)),
            Value::Object(_) => Err(Error::BackendMismatch(format!("{path}: cyclotomic scalar in a complex document"))),
            _ => Err(parse_err(path, "expected [re, im]")),
        }
    }
}

fn int_to_json(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(x) => json!(x),
        None => json!(n.to_string()),
    }
}

fn int_from_json(v: &Value, path: &str) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| parse_err(path, "expected an integer")),
        Value::String(s) => s.parse().map_err(|_| parse_err(path, "expected an integer string")),
        _ => Err(parse_err(path, "expected an integer")),
    }
}

impl JsonField for CyclotomicField {
    fn scalar_to_json(&self, a: &crate::field::CycloElem) -> Value {
        let coeffs: Vec<Value> = a
            .coeffs()
            .iter()
            .map(|c| json!([int_to_json(c.numer()), int_to_json(c.denom())]))
            .collect();
        json!({"N": self.order(), "coeffs": coeffs})
    }

    fn scalar_from_json(&self, v: &Value, path: &str) -> Result<crate::field::CycloElem> {
        let Value::Object(o) = v else {
            if v.is_array() {
                return Err(Error::BackendMismatch(format!("{path}: complex scalar in a cyclotomic document")));
            }
            return Err(parse_err(path, "expected {\"N\": n, \"coeffs\": [...]}"));
        };
        let n = o.get("N").and_then(Value::as_u64).ok_or_else(|| parse_err(path, "missing integer \"N\""))?;
        if n != self.order() {
            return Err(Error::BackendMismatch(format!(
                "{path}: scalar in Q(zeta_{n}) but the document field is Q(zeta_{})",
                self.order()
            )));
        }
        let Some(Value::Array(cs)) = o.get("coeffs") else {
            return Err(parse_err(path, "missing array \"coeffs\""));
        };
        let mut out = Vec::with_capacity(cs.len());
        for (i, c) in cs.iter().enumerate() {
            let p = format!("{path}.coeffs[{i}]");
            let (num, den) = match c {
                Value::Array(nd) if nd.len() == 2 => (int_from_json(&nd[0], &p)?, int_from_json(&nd[1], &p)?),
                Value::Array(nd) if nd.len() == 1 => (int_from_json(&nd[0], &p)?, BigInt::from(1)),
                _ => (int_from_json(c, &p)?, BigInt::from(1)),
            };
            if den.is_zero() {
                return Err(parse_err(&p, "zero denominator"));
            }
            out.push(BigRational::new(num, den));
        }
        self.element(&out).map_err(|e| parse_err(path, e))
    }
}

pub fn triple_to_json<F: JsonField>(f: &F, t: &[F::Elem; 3]) -> Value {
    Value::Array(t.iter().map(|x| f.scalar_to_json(x)).collect())
}

pub fn triple_from_json<F: JsonField>(f: &F, v: &Value, path: &str) -> Result<[F::Elem; 3]> {
    match v {
        Value::Array(a) if a.len() == 3 => Ok([
            f.scalar_from_json(&a[0], &format!("{path}[0]"))?,
            f.scalar_from_json(&a[1], &format!("{path}[1]"))?,
            f.scalar_from_json(&a[2], &format!("{path}[2]"))?,
        ]),
        _ => Err(parse_err(path, "expected an array of three scalars")),
    }
}

pub fn point_from_json<F: JsonField>(f: &F, v: &Value, path: &str) -> Result<Point<F::Elem>> {
    Point::new(f, triple_from_json(f, v, path)?).map_err(|e| parse_err(path, e))
}

pub fn line_from_json<F: JsonField>(f: &F, v: &Value, path: &str) -> Result<Line<F::Elem>> {
    Line::new(f, triple_from_json(f, v, path)?).map_err(|e| parse_err(path, e))
}

pub fn vector_to_json<F: JsonField>(f: &F, v: &[F::Elem]) -> Value {
    Value::Array(v.iter().map(|x| f.scalar_to_json(x)).collect())
}

pub fn vector_from_json<F: JsonField>(f: &F, v: &Value, path: &str) -> Result<Vec<F::Elem>> {
    let Value::Array(a) = v else {
        return Err(parse_err(path, "expected an array of scalars"));
    };
    a.iter()
        .enumerate()
        .map(|(i, x)| f.scalar_from_json(x, &format!("{path}[{i}]")))
        .collect()
}

pub fn cubic_to_json<F: JsonField>(f: &F, c: &Cubic<F::Elem>) -> Value {
    json!({"coeffs": vector_to_json(f, c.coeffs())})
}

pub fn cubic_from_json<F: JsonField>(f: &F, v: &Value, path: &str) -> Result<Cubic<F::Elem>> {
    let coeffs = v.get("coeffs").ok_or_else(|| parse_err(path, "missing \"coeffs\""))?;
    let c = vector_from_json(f, coeffs, &format!("{path}.coeffs"))?;
    if c.len() != 10 {
        return Err(parse_err(path, format!("a cubic has 10 coefficients, got {}", c.len())));
    }
    Cubic::new(f, c).map_err(|e| parse_err(path, e))
}

pub fn net_to_json<F: JsonField>(net: &Net<F>) -> Value {
    let f = net.field();
    let classes: Vec<Value> = net
        .classes()
        .iter()
        .map(|c| Value::Array(c.iter().map(|l| triple_to_json(f, l.coords())).collect()))
        .collect();
    let mut out = json!({"field": f.backend(), "classes": classes});
    if let Some(pts) = net.input_points() {
        out["points"] = Value::Array(pts.iter().map(|p| triple_to_json(f, p.coords())).collect());
    }
    out
}

/// Reads the `classes` and `points` of a net document in the field `f`.
pub fn net_from_json<F: JsonField>(f: &F, v: &Value) -> Result<Net<F>> {
    let Some(Value::Array(cs)) = v.get("classes") else {
        return Err(parse_err("$", "missing array \"classes\""));
    };
    let mut classes = Vec::with_capacity(cs.len());
    for (i, c) in cs.iter().enumerate() {
        let Value::Array(ls) = c else {
            return Err(parse_err(&format!("$.classes[{i}]"), "expected an array of lines"));
        };
        classes.push(
            ls.iter()
                .enumerate()
                .map(|(j, l)| line_from_json(f, l, &format!("$.classes[{i}][{j}]")))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    let net = Net::new(f.clone(), classes);
    Ok(match v.get("points") {
        None | Some(Value::Null) => net,
        Some(Value::Array(ps)) => net.with_points(
            ps.iter()
                .enumerate()
                .map(|(j, p)| point_from_json(f, p, &format!("$.points[{j}]")))
                .collect::<Result<Vec<_>>>()?,
        ),
        Some(_) => return Err(parse_err("$.points", "expected an array of points")),
    })
}

/// A net in whichever backend its document names.
#[derive(Debug, Clone)]
pub enum AnyNet {
    Complex(Net<ApproxComplex>),
    Cyclotomic(Net<CyclotomicField>),
}

/// Parses text as JSON, reporting the line and column of syntax errors.
pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| {
        let msg = e.to_string();
        let msg = msg.split(" at line ").next().unwrap_or(&msg);
        Error::Parse(format!("line {} column {}: {msg}", e.line(), e.column()))
    })
}

/// Reads a net document; `approx` supplies the tolerances of a complex net.
pub fn read_net(text: &str, approx: &ApproxComplex) -> Result<AnyNet> {
    let v = parse_json(text)?;
    let field = v.get("field").ok_or_else(|| parse_err("$", "missing \"field\""))?;
    let backend: Backend =
        serde_json::from_value(field.clone()).map_err(|_| parse_err("$.field", "expected \"complex\" or {\"cyclotomic\": N}"))?;
    Ok(match backend {
        Backend::Complex => AnyNet::Complex(net_from_json(approx, &v)?),
        Backend::Cyclotomic(n) => {
            let q = CyclotomicField::new(n).map_err(|e| parse_err("$.field", e))?;
            AnyNet::Cyclotomic(net_from_json(&q, &v)?)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{pencil_net, torus_net, TorusOptions};

    #[test]
    fn exact_round_trip() {
        let q = CyclotomicField::new(5).unwrap();
        let net = pencil_net(&q, 5).unwrap();
        let text = net_to_json(&net).to_string();
        let AnyNet::Cyclotomic(back) = read_net(&text, &ApproxComplex::default()).unwrap() else {
            panic!("wrong backend")
        };
        assert_eq!(back.classes(), net.classes());
        assert_eq!(net_to_json(&back).to_string(), text);
    }

    #[test]
    fn approx_round_trip() {
        let f = ApproxComplex::default();
        let net = torus_net(&f, &[3], &TorusOptions::default()).unwrap();
        let text = net_to_json(&net).to_string();
        let AnyNet::Complex(back) = read_net(&text, &f).unwrap() else { panic!("wrong backend") };
        assert_eq!(back.classes(), net.classes());
    }

    #[test]
    fn big_integers_as_strings() {
        let q = CyclotomicField::new(1).unwrap();
        let big = BigInt::from(10).pow(30);
        let x = q.element(&[BigRational::new(big.clone(), BigInt::from(7))]).unwrap();
        let v = q.scalar_to_json(&x);
        assert!(v["coeffs"][0][0].is_string());
        assert_eq!(q.scalar_from_json(&v, "$").unwrap(), x);
    }

    #[test]
    fn diagnostics_name_the_location() {
        let f = ApproxComplex::default();
        let e = read_net("{\"field\": \"complex\", \"classes\": [[[[1,0],[0,0]]]]}", &f).unwrap_err();
        assert!(e.to_string().contains("$.classes[0][0]"), "{e}");
        let e = read_net("{\"field\": \"complex\",\n \"classes\": [", &f).unwrap_err();
        assert!(e.to_string().contains("line 2"), "{e}");
        let e = read_net("{\"field\": {\"cyclotomic\": 3}, \"classes\": [[[[1,0],[0,0],[0,0]]]]}", &f).unwrap_err();
        assert!(matches!(e, Error::BackendMismatch(_)), "{e}");
    }
}
