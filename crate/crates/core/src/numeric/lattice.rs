//! Enumeration of integer lattice points.

/// All `xi` in `Z^d` with `|xi| <= radius`, in lexicographic order.
pub fn lattice_points_in_ball(dim: usize, radius: f64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    if radius < 0.0 || dim == 0 {
        return out;
    }
    let mut cur = vec![0i64; dim];
    fill(&mut cur, 0, radius * radius, &mut out);
    out
}

fn fill(cur: &mut Vec<i64>, depth: usize, budget: f64, out: &mut Vec<Vec<i64>>) {
    if depth == cur.len() {
        out.push(cur.clone());
        return;
    }
    let m = budget.max(0.0).sqrt().floor() as i64;
    for k in -m..=m {
        let rest = budget - (k * k) as f64;
        if rest < 0.0 {
            continue;
        }
        cur[depth] = k;
        fill(cur, depth + 1, rest, out);
    }
}

/// Orthonormal basis of the tangent space `u^perp` for a unit vector `u`, `d` in {2, 3}.
pub(crate) fn tangent_basis(u: &[f64]) -> [[f64; 3]; 2] {
    if u.len() == 2 {
        return [[-u[1], u[0], 0.0], [0.0; 3]];
    }
    let a = if u[2].abs() < 0.9 {
        [0.0, 0.0, 1.0]
    } else {
        [1.0, 0.0, 0.0]
    };
    let au = a[0] * u[0] + a[1] * u[1] + a[2] * u[2];
    let mut e1 = [a[0] - au * u[0], a[1] - au * u[1], a[2] - au * u[2]];
    let n1 = (e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]).sqrt();
    e1.iter_mut().for_each(|x| *x /= n1);
    let e2 = [
        u[1] * e1[2] - u[2] * e1[1],
        u[2] * e1[0] - u[0] * e1[2],
        u[0] * e1[1] - u[1] * e1[0],
    ];
    [e1, e2]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_circle_counts() {
        // r(n) summed: number of lattice points with |x| <= 5 in Z^2 is 81
        assert_eq!(lattice_points_in_ball(2, 5.0).len(), 81);
        assert_eq!(lattice_points_in_ball(3, 1.0).len(), 7);
        assert_eq!(lattice_points_in_ball(2, 0.5), vec![vec![0, 0]]);
        let pts = lattice_points_in_ball(2, 3.0);
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn tangent_basis_is_orthonormal() {
        for u in [[0.0, 0.0, 1.0], [0.6, 0.8, 0.0], [0.48, 0.6, 0.64]] {
            let [e1, e2] = tangent_basis(&u);
            let d = |a: &[f64; 3], b: &[f64]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
            assert!(d(&e1, &u).abs() < 1e-15 && d(&e2, &u).abs() < 1e-15);
            assert!(d(&e1, &e2).abs() < 1e-15);
            assert!((d(&e1, &e1) - 1.0).abs() < 1e-15 && (d(&e2, &e2) - 1.0).abs() < 1e-15);
        }
    }
}
