use std::fmt::Debug;

use num_rational::BigRational;
use num_traits::{Num, Signed, Zero};

use crate::game::Game;
use crate::lattice::{ElementId, FiniteLattice};
use crate::value::{divide, Extended, MaybeBounded, Ordered, Value, ValueDomain, ValueLattice};
use crate::{DynGame, ScalarGame};

use super::InstanceError;

/// Degree and rank potentials, indexed by element.
///
/// The pay-off is the slope `(D(y) - D(x)) / (R(y) - R(x))`, or `+∞` where
/// the rank does not grow. Writing `d` and `r` as differences of potentials
/// makes them additive along chains by construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeRankData {
    pub degree: Vec<Value>,
    pub rank: Vec<BigRational>,
}

fn difference(a: &Value, b: &Value) -> Value {
    match (a, b) {
        (Value::Rational(x), Value::Rational(y)) => Value::Rational(x - y),
        (Value::LexTuple(x), Value::LexTuple(y)) => Value::LexTuple(x.iter().zip(y).map(|(p, q)| p - q).collect()),
        _ => unreachable!("degrees are checked before use"),
    }
}

fn is_positive(v: &Value) -> bool {
    match v {
        Value::Rational(x) => x.is_positive(),
        Value::LexTuple(c) => c.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_positive()),
        _ => false,
    }
}

/// Slope game over a rational or lex-tuple domain.
pub fn game_from_degree_rank(
    lattice: FiniteLattice,
    data: &DegreeRankData,
    domain: ValueDomain,
) -> Result<DynGame, InstanceError> {
    let n = lattice.len();
    for (what, got) in [("degree", data.degree.len()), ("rank", data.rank.len())] {
        if got != n {
            return Err(InstanceError::LengthMismatch { what, expected: n, got });
        }
    }
    for x in lattice.elements() {
        let d = &data.degree[x.0];
        if !matches!(d, Value::Rational(_) | Value::LexTuple(_)) || !domain.contains(d) {
            return Err(InstanceError::BadDegree(lattice.label(x).into()));
        }
        if data.rank[x.0].is_negative() {
            return Err(InstanceError::NegativeRank(lattice.label(x).into()));
        }
    }
    check_potentials(&lattice, |x, y| {
        let r = &data.rank[y.0] - &data.rank[x.0];
        (r.signum(), is_positive(&difference(&data.degree[y.0], &data.degree[x.0])))
    })?;
    let game = Game::new(lattice, domain, |x, y| {
        let r = &data.rank[y.0] - &data.rank[x.0];
        if r.is_zero() {
            Value::PosInfinity
        } else {
            divide(&difference(&data.degree[y.0], &data.degree[x.0]), &r)
        }
    })?;
    Ok(game)
}

/// `rank_step(x, y)` returns the sign of `R(y) - R(x)` and whether `D(y) > D(x)`.
fn check_potentials<T: Signed>(
    lattice: &FiniteLattice,
    rank_step: impl Fn(ElementId, ElementId) -> (T, bool),
) -> Result<(), InstanceError> {
    for (x, y) in lattice.strict_pairs() {
        let (sign, degree_up) = rank_step(x, y);
        let labels = || (lattice.label(x).to_string(), lattice.label(y).to_string());
        if sign.is_negative() {
            let (a, b) = labels();
            return Err(InstanceError::RankNotMonotone(a, b));
        }
        if sign.is_zero() && !degree_up {
            let (a, b) = labels();
            return Err(InstanceError::ZeroRankNonPositiveDegree(a, b));
        }
    }
    Ok(())
}

/// Slope game over any ordered scalar with exact division, such as
/// `Ratio<i64>` or `BigRational`. Integer types truncate and should not be used.
pub fn scalar_degree_rank<T>(lattice: FiniteLattice, degree: &[T], rank: &[T]) -> Result<ScalarGame<T>, InstanceError>
where
    T: Num + Signed + Ord + Clone + Debug + MaybeBounded,
{
    let n = lattice.len();
    for (what, got) in [("degree", degree.len()), ("rank", rank.len())] {
        if got != n {
            return Err(InstanceError::LengthMismatch { what, expected: n, got });
        }
    }
    if let Some(x) = lattice.elements().find(|x| rank[x.0].is_negative()) {
        return Err(InstanceError::NegativeRank(lattice.label(x).into()));
    }
    check_potentials(&lattice, |x, y| {
        let r = rank[y.0].clone() - rank[x.0].clone();
        (r.signum(), degree[y.0] > degree[x.0])
    })?;
    let game = Game::new(lattice, Ordered::new(), |x, y| {
        let r = rank[y.0].clone() - rank[x.0].clone();
        if r.is_zero() {
            Extended::PosInfinity
        } else {
            Extended::Finite((degree[y.0].clone() - degree[x.0].clone()) / r)
        }
    })?;
    Ok(game)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::tests::{chain, cube2};
    use num_rational::Rational64;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn square_data(wp: i64, wq: i64) -> DegreeRankData {
        DegreeRankData {
            degree: vec![Value::int(0), Value::int(wp), Value::int(wq), Value::int(wp + wq)],
            rank: vec![q(0), q(1), q(1), q(2)],
        }
    }

    #[test]
    fn square_slopes() {
        let g = game_from_degree_rank(cube2(), &square_data(3, 1), ValueDomain::rational()).unwrap();
        let id = ElementId;
        assert_eq!(g.payoff(id(0), id(1)), Some(&Value::int(3)));
        assert_eq!(g.payoff(id(0), id(2)), Some(&Value::int(1)));
        assert_eq!(g.payoff(id(0), id(3)), Some(&Value::int(2)));
        assert!(g.is_slope_like().unwrap() && g.is_affine() && g.is_convex());
    }

    #[test]
    fn flat_rank_is_infinite() {
        let data = DegreeRankData {
            degree: vec![Value::int(0), Value::int(1), Value::int(3)],
            rank: vec![q(0), q(1), q(1)],
        };
        let g = game_from_degree_rank(chain(&["0", "1", "2"]), &data, ValueDomain::rational()).unwrap();
        assert_eq!(g.payoff(ElementId(1), ElementId(2)), Some(&Value::PosInfinity));
        assert_eq!(g.payoff(ElementId(0), ElementId(2)), Some(&Value::int(3)));
        assert!(g.is_slope_like().unwrap());
    }

    #[test]
    fn zero_degree_is_semistable() {
        let data = DegreeRankData { degree: vec![Value::int(0); 3], rank: vec![q(0), q(1), q(3)] };
        let g = game_from_degree_rank(chain(&["0", "1", "2"]), &data, ValueDomain::rational()).unwrap();
        assert!(g.is_semistable());
        assert_eq!(g.mu_a_star(), Value::int(0));
    }

    #[test]
    fn lex_tuple_degrees() {
        let lex = |a: i64, b: i64| Value::LexTuple(vec![q(a), q(b)]);
        let data = DegreeRankData {
            degree: vec![lex(0, 0), lex(1, 0), lex(0, 5), lex(1, 5)],
            rank: vec![q(0), q(1), q(1), q(2)],
        };
        let g = game_from_degree_rank(cube2(), &data, ValueDomain::lex_tuple(2)).unwrap();
        assert_eq!(g.payoff(ElementId(0), ElementId(3)), Some(&Value::LexTuple(vec![BigRational::new(1.into(), 2.into()), BigRational::new(5.into(), 2.into())])));
        assert_eq!(g.st_set(), vec![ElementId(1)]);
        assert!(g.is_slope_like().unwrap());
    }

    #[test]
    fn invalid_potentials() {
        let l = chain(&["0", "1", "2"]);
        let d = ValueDomain::rational();
        let bad_rank = DegreeRankData { degree: vec![Value::int(0); 3], rank: vec![q(0), q(2), q(1)] };
        assert_eq!(
            game_from_degree_rank(l.clone(), &bad_rank, d.clone()).unwrap_err(),
            InstanceError::RankNotMonotone("1".into(), "2".into())
        );
        let flat = DegreeRankData { degree: vec![Value::int(0), Value::int(1), Value::int(1)], rank: vec![q(0), q(1), q(1)] };
        assert_eq!(
            game_from_degree_rank(l.clone(), &flat, d.clone()).unwrap_err(),
            InstanceError::ZeroRankNonPositiveDegree("1".into(), "2".into())
        );
        let negative = DegreeRankData { degree: vec![Value::int(0); 3], rank: vec![q(-1), q(1), q(1)] };
        assert!(matches!(game_from_degree_rank(l.clone(), &negative, d.clone()), Err(InstanceError::NegativeRank(_))));
        let short = DegreeRankData { degree: vec![Value::int(0); 2], rank: vec![q(0); 3] };
        assert!(matches!(game_from_degree_rank(l.clone(), &short, d.clone()), Err(InstanceError::LengthMismatch { .. })));
        let primes = DegreeRankData { degree: vec![Value::primes(&[2]); 3], rank: vec![q(0), q(1), q(2)] };
        assert!(matches!(game_from_degree_rank(l, &primes, d), Err(InstanceError::BadDegree(_))));
    }

    #[test]
    fn scalar_matches_dynamic() {
        let g = scalar_degree_rank(cube2(), &[0, 3, 1, 4].map(Rational64::from_integer), &[0, 1, 1, 2].map(Rational64::from_integer))
            .unwrap();
        let h = game_from_degree_rank(cube2(), &square_data(3, 1), ValueDomain::rational()).unwrap();
        for (x, y) in g.lattice().strict_pairs() {
            let Extended::Finite(a) = g.mu_a(x, y).unwrap() else { panic!("finite") };
            let b = Value::Rational(BigRational::new((*a.numer()).into(), (*a.denom()).into()));
            assert_eq!(h.mu_a(x, y).unwrap(), b);
        }
        assert_eq!(g.st_set(), h.st_set());
        assert!(scalar_degree_rank(chain(&["a", "b"]), &[Rational64::from_integer(0); 2], &[Rational64::from_integer(1); 2]).is_err());
    }
}
