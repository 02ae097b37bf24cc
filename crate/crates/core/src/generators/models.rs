use rand::Rng;

use super::{invalid, rng_from_seed, GeneratorError};
use crate::graph::{Graph, GraphBuilder};

fn check_probability(name: &'static str, p: f64) -> Result<(), GeneratorError> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(invalid(name, p, "must lie in [0, 1]"))
    }
}

/// Erdős–Rényi: every pair independently with probability `p`.
pub fn gen_er(n: usize, p: f64, seed: u64) -> Result<Graph, GeneratorError> {
    check_probability("p", p)?;
    let mut rng = rng_from_seed(seed);
    let mut b = GraphBuilder::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen::<f64>() < p {
                b.add_edge(u, v);
            }
        }
    }
    Ok(b.build())
}

/// Preferential attachment from a complete seed graph `K_k`; every new vertex
/// links to `k` distinct existing vertices chosen proportionally to degree.
pub fn gen_sf(n: usize, k: usize, seed: u64) -> Result<Graph, GeneratorError> {
    if k < 2 || k >= n {
        return Err(invalid("k", k, "need 2 <= k < n"));
    }
    let mut rng = rng_from_seed(seed);
    let mut b = GraphBuilder::new(n);
    // each vertex appears once per incident edge end
    let mut ends: Vec<usize> = Vec::with_capacity(2 * (k * (k - 1) / 2 + (n - k) * k));
    for u in 0..k {
        for v in u + 1..k {
            b.add_edge(u, v);
            ends.push(u);
            ends.push(v);
        }
    }
    let mut targets = Vec::with_capacity(k);
    for v in k..n {
        targets.clear();
        while targets.len() < k {
            let t = ends[rng.gen_range(0..ends.len())];
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for &t in &targets {
            b.add_edge(v, t);
            ends.push(t);
            ends.push(v);
        }
    }
    Ok(b.build())
}

/// Watts–Strogatz: ring lattice with `k` nearest neighbors, then each
/// lattice edge `(u, u + j)` is rewired with probability `p` to `(u, w)` for a
/// uniform `w` that creates neither a loop nor a duplicate. Edges are scanned
/// by offset `j = 1..=k/2`, then by `u`.
pub fn gen_sw(n: usize, k: usize, p: f64, seed: u64) -> Result<Graph, GeneratorError> {
    check_probability("p", p)?;
    if k < 2 || k % 2 != 0 || k >= n {
        return Err(invalid("k", k, "need an even k with 2 <= k < n"));
    }
    let mut rng = rng_from_seed(seed);
    let mut b = GraphBuilder::new(n);
    for u in 0..n {
        for j in 1..=k / 2 {
            b.add_edge(u, (u + j) % n);
        }
    }
    for j in 1..=k / 2 {
        for u in 0..n {
            if rng.gen::<f64>() >= p {
                continue;
            }
            if b.degree(u) >= n - 1 {
                continue;
            }
            let v = (u + j) % n;
            let w = loop {
                let w = rng.gen_range(0..n);
                if w != u && !b.has_edge(u, w) {
                    break w;
                }
            };
            b.remove_edge(u, v);
            b.add_edge(u, w);
        }
    }
    Ok(b.build())
}

/// Side length of the square grid holding `n` vertices.
pub(crate) fn grid_side(n: usize) -> Result<usize, GeneratorError> {
    let side = (n as f64).sqrt().round() as usize;
    if side * side == n && n > 0 {
        Ok(side)
    } else {
        Err(invalid("n", n, "geographical model needs a perfect square"))
    }
}

/// Geographical model on a `sqrt(n) x sqrt(n)` grid: pair `(i, j)` links with
/// probability `kappa^(-s)`, `s` the Manhattan distance of their grid cells.
pub fn gen_gr(n: usize, kappa: f64, seed: u64) -> Result<Graph, GeneratorError> {
    if !(kappa > 1.0) {
        return Err(invalid("kappa", kappa, "must exceed 1"));
    }
    let side = grid_side(n)?;
    // probabilities by distance, s <= 2 (side - 1)
    let table: Vec<f64> = (0..=2 * side).map(|s| kappa.powi(-(s as i32))).collect();
    let mut rng = rng_from_seed(seed);
    let mut b = GraphBuilder::new(n);
    for i in 0..n {
        let (ri, ci) = (i / side, i % side);
        for j in i + 1..n {
            let (rj, cj) = (j / side, j % side);
            let s = ri.abs_diff(rj) + ci.abs_diff(cj);
            if rng.gen::<f64>() < table[s] {
                b.add_edge(i, j);
            }
        }
    }
    Ok(b.build())
}

/// Overlapping communities: every vertex joins each of `c` communities with
/// probability `p_c`; a pair sharing at least one community links with
/// probability `p` (a single trial per pair).
pub fn gen_cs(n: usize, p_c: f64, p: f64, c: usize, seed: u64) -> Result<Graph, GeneratorError> {
    community_graph(n, p_c, p, c, false, seed)
}

/// [`gen_cs`] with memberships conditioned on joining at least one community:
/// a vertex whose draw comes out empty draws again.
pub fn gen_cs_covering(
    n: usize,
    p_c: f64,
    p: f64,
    c: usize,
    seed: u64,
) -> Result<Graph, GeneratorError> {
    if p_c == 0.0 {
        return Err(invalid("p_c", p_c, "covering memberships need p_c > 0"));
    }
    community_graph(n, p_c, p, c, true, seed)
}

/// Membership bitsets, one `Vec<u64>` row per vertex.
pub(crate) fn draw_memberships<R: Rng>(
    rng: &mut R,
    n: usize,
    p_c: f64,
    c: usize,
    covering: bool,
) -> Vec<Vec<u64>> {
    let words = c.div_ceil(64);
    (0..n)
        .map(|_| loop {
            let mut row = vec![0u64; words];
            for community in 0..c {
                if rng.gen::<f64>() < p_c {
                    row[community / 64] |= 1 << (community % 64);
                }
            }
            if !covering || row.iter().any(|&w| w != 0) {
                break row;
            }
        })
        .collect()
}

fn community_graph(
    n: usize,
    p_c: f64,
    p: f64,
    c: usize,
    covering: bool,
    seed: u64,
) -> Result<Graph, GeneratorError> {
    check_probability("p_c", p_c)?;
    check_probability("p", p)?;
    if c == 0 {
        return Err(invalid("c", c, "need at least one community"));
    }
    let mut rng = rng_from_seed(seed);
    let members = draw_memberships(&mut rng, n, p_c, c, covering);
    let mut b = GraphBuilder::new(n);
    for u in 0..n {
        for v in u + 1..n {
            let shared = members[u].iter().zip(&members[v]).any(|(a, b)| a & b != 0);
            if shared && rng.gen::<f64>() < p {
                b.add_edge(u, v);
            }
        }
    }
    Ok(b.build())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::bfs_all_pairs;

    #[test]
    fn er_extremes() {
        assert_eq!(gen_er(5, 1.0, 1).unwrap(), Graph::complete(5));
        assert_eq!(gen_er(5, 0.0, 1).unwrap().m(), 0);
        assert!(gen_er(5, -0.1, 1).is_err());
    }

    #[test]
    fn er_mean_edge_count_binomial() {
        // m ~ Binomial(4950, 0.1): mean 495, sd sqrt(445.5); mean of 200 draws
        // has sd sqrt(445.5 / 200)
        let seeds = 200;
        let total: usize = (0..seeds).map(|s| gen_er(100, 0.1, s).unwrap().m()).sum();
        let mean = total as f64 / seeds as f64;
        let sd = (4950.0 * 0.1 * 0.9 / seeds as f64).sqrt();
        assert!((mean - 495.0).abs() < 3.0 * sd, "mean {mean}");
    }

    #[test]
    fn sf_edge_counts_and_min_degree() {
        for (k, expected) in [(2, 197), (3, 294), (5, 10 + 95 * 5)] {
            for seed in 0..5 {
                let g = gen_sf(100, k, seed).unwrap();
                assert_eq!(g.m(), expected);
                assert!(g.degrees().iter().all(|&d| d >= k));
            }
        }
        assert!(gen_sf(5, 5, 0).is_err());
    }

    #[test]
    fn sw_lattice_without_rewiring() {
        let g = gen_sw(100, 4, 0.0, 9).unwrap();
        assert!(g.degrees().iter().all(|&d| d == 4));
        assert!(g.has_edge(0, 99) && g.has_edge(0, 98) && g.has_edge(0, 2));
        assert_eq!(g.m(), 200);
    }

    #[test]
    fn sw_conserves_edges() {
        for (n, k, p) in [(50, 4, 0.3), (60, 8, 1.0), (30, 16, 0.5), (20, 2, 0.9)] {
            for seed in 0..5 {
                assert_eq!(gen_sw(n, k, p, seed).unwrap().m(), n * k / 2);
            }
        }
    }

    #[test]
    fn sw_shortcuts_shrink_mean_distance() {
        let mean_distance = |g: &Graph| {
            let geo = bfs_all_pairs(g);
            let n = g.n();
            let mut total = 0u64;
            for i in 0..n {
                total += geo.dist_row(i).iter().map(|&d| d as u64).sum::<u64>();
            }
            total as f64 / (n * (n - 1)) as f64
        };
        let lattice = mean_distance(&gen_sw(500, 8, 0.0, 0).unwrap());
        let mut rewired = 0.0;
        let mut counted = 0;
        for seed in 0..30 {
            let g = gen_sw(500, 8, 0.1, seed).unwrap();
            if g.is_connected() {
                rewired += mean_distance(&g);
                counted += 1;
            }
        }
        assert!(counted >= 25);
        assert!((rewired / counted as f64) < lattice);
    }

    #[test]
    fn gr_grid_distance_probabilities() {
        // s(0, 1) = 1 and s(0, 11) = 2 on the 10 x 10 grid; with kappa = 2
        // the empirical link frequencies approach 1/2 and 1/4
        let trials = 2000;
        let (mut near, mut diag) = (0, 0);
        for seed in 0..trials {
            let g = gen_gr(100, 2.0, seed).unwrap();
            near += g.has_edge(0, 1) as usize;
            diag += g.has_edge(0, 11) as usize;
        }
        let sd = |p: f64| (p * (1.0 - p) / trials as f64).sqrt();
        assert!((near as f64 / trials as f64 - 0.5).abs() < 4.0 * sd(0.5));
        assert!((diag as f64 / trials as f64 - 0.25).abs() < 4.0 * sd(0.25));
        assert!(gen_gr(500, 2.0, 0).is_err());
    }

    #[test]
    fn gr_smaller_kappa_means_more_edges() {
        let mean_m = |kappa| {
            (0..30)
                .map(|s| gen_gr(100, kappa, s).unwrap().m())
                .sum::<usize>()
        };
        assert!(mean_m(1.2) > mean_m(2.0));
    }

    #[test]
    fn cs_extremes() {
        assert_eq!(gen_cs(12, 1.0, 1.0, 1, 4).unwrap(), Graph::complete(12));
        assert_eq!(gen_cs(12, 0.0, 1.0, 3, 4).unwrap().m(), 0);
        assert!(gen_cs_covering(12, 0.0, 1.0, 3, 4).is_err());
    }

    #[test]
    fn cs_membership_rate() {
        // memberships per vertex ~ Binomial(10, 0.1): mean 1, per-seed mean of
        // 100 vertices has sd sqrt(0.9 / 100)
        let seeds = 100;
        let mut total = 0usize;
        for seed in 0..seeds {
            let mut rng = rng_from_seed(seed);
            let m = draw_memberships(&mut rng, 100, 0.1, 10, false);
            total += m.iter().map(|r| r[0].count_ones() as usize).sum::<usize>();
        }
        let mean = total as f64 / (seeds as f64 * 100.0);
        let sd = (0.9 / (seeds as f64 * 100.0)).sqrt();
        assert!((mean - 1.0).abs() < 3.0 * sd, "mean {mean}");
    }

    #[test]
    fn cs_covering_gives_everyone_a_community() {
        let mut rng = rng_from_seed(5);
        let m = draw_memberships(&mut rng, 200, 0.1, 2, true);
        assert!(m.iter().all(|r| r[0] != 0));
        let g = gen_cs_covering(100, 0.1, 0.7, 10, 3).unwrap();
        assert_eq!(g.n(), 100);
    }

    #[test]
    fn generators_are_deterministic() {
        assert_eq!(gen_er(60, 0.2, 42).unwrap(), gen_er(60, 0.2, 42).unwrap());
        assert_ne!(gen_er(60, 0.2, 42).unwrap(), gen_er(60, 0.2, 43).unwrap());
        assert_eq!(
            gen_sw(60, 4, 0.3, 1).unwrap(),
            gen_sw(60, 4, 0.3, 1).unwrap()
        );
        assert_eq!(gen_sf(60, 3, 1).unwrap(), gen_sf(60, 3, 1).unwrap());
        assert_eq!(gen_gr(64, 1.5, 1).unwrap(), gen_gr(64, 1.5, 1).unwrap());
        assert_eq!(
            gen_cs(60, 0.1, 0.5, 6, 1).unwrap(),
            gen_cs(60, 0.1, 0.5, 6, 1).unwrap()
        );
    }
}
