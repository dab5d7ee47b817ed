use num_traits::One;

use crate::Q;

pub fn factorial(n: usize) -> Q {
    (1..=n).fold(Q::one(), |acc, k| acc * Q::from_integer(k as i128))
}

pub fn binomial(n: usize, k: usize) -> Q {
    if k > n {
        return Q::from_integer(0);
    }
    let mut out = Q::one();
    for i in 0..k {
        out = out * Q::from_integer((n - i) as i128) / Q::from_integer(i as i128 + 1);
    }
    out
}

pub fn sign(odd: bool) -> Q {
    if odd {
        -Q::one()
    } else {
        Q::one()
    }
}
