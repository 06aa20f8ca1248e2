use cellspace_core::analyzer::{image_patterns, verify_goe_pattern, Schedule};
use cellspace_core::automaton::{derive_n_prime, induced_left_action, induced_right_semi_action, Pattern};
use cellspace_core::geometry;
use cellspace_core::rules;
use cellspace_core::space::{cosets_of_cells, CellSet, CellSpace};
use cellspace_core::spaces::{Dihedral, Isometry, Lattice, P4m, P4mCoordinates, PointOp};
use proptest::prelude::*;

fn cells2(max: usize) -> impl Strategy<Value = CellSet<[i64; 2]>> {
    prop::collection::btree_set((-4i64..=4, -4i64..=4).prop_map(|(x, y)| [x, y]), 0..max)
}

fn isometry() -> impl Strategy<Value = Isometry> {
    (-6i64..=6, -6i64..=6, 0u8..8).prop_map(|(x, y, r)| {
        let op = PointOp::all().nth(r as usize).unwrap();
        let mut g = Isometry::translation([x, y]);
        g.op = op;
        g
    })
}

fn coordinates() -> impl Strategy<Value = P4mCoordinates> {
    prop_oneof![Just(P4mCoordinates::Translation), Just(P4mCoordinates::Twisted)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn pattern_index_round_trips(len in 1usize..10, q in 2u8..4, seed in any::<u64>()) {
        let z = Lattice::<1>::new();
        let domain = z.cube(0, len as i64);
        let idx = seed % (q as u64).pow(len as u32);
        let p = Pattern::from_index(&domain, q, idx);
        prop_assert_eq!(p.index(q), idx);
        prop_assert_eq!(p.len(), len);
    }

    #[test]
    fn pattern_order_is_index_order(a in any::<u16>(), b in any::<u16>()) {
        let z = Lattice::<1>::new();
        let domain = z.cube(0, 16);
        let (pa, pb) = (Pattern::from_index(&domain, 2, a as u64), Pattern::from_index(&domain, 2, b as u64));
        prop_assert_eq!(pa.cmp(&pb), a.cmp(&b));
    }

    #[test]
    fn cosets_are_canonical(g in isometry(), coords in coordinates()) {
        let space = P4m::new(coords);
        let c = space.coset(&g);
        for g0 in space.stabiliser() {
            prop_assert_eq!(space.coset(&space.compose(&g, g0)), c.clone());
        }
        prop_assert!(space.coset_contains(&c, &g));
        prop_assert_eq!(space.coset_elements(&c).len(), 8);
    }

    #[test]
    fn transporters_reach_their_cell(g in isometry(), coords in coordinates()) {
        let space = P4m::new(coords);
        let m = space.act(&g, &space.origin()).unwrap();
        prop_assert_eq!(space.act(&space.transporter(&m), &space.origin()).unwrap(), m);
        prop_assert_eq!(space.semi_act(&m, &space.stabiliser_coset()).unwrap(), m);
        prop_assert_eq!(space.semi_act(&space.origin(), &space.iota(&m)).unwrap(), m);
    }

    #[test]
    fn undo_representative_inverts(g in isometry(), h in isometry(), coords in coordinates()) {
        let space = P4m::new(coords);
        let m = space.act(&g, &space.origin()).unwrap();
        let c = space.coset(&h);
        let u = space.undo_representative(&m, &c).unwrap();
        prop_assert!(space.coset_contains(&c, &u));
        let there = space.semi_act(&m, &c).unwrap();
        let back = space.coset(&space.inverse(&u));
        prop_assert_eq!(space.semi_act(&there, &back).unwrap(), m);
    }

    #[test]
    fn interior_inside_closure(a in cells2(14), e in cells2(5), coords in coordinates()) {
        let space = P4m::new(coords);
        let mut e: Vec<_> = e.into_iter().map(|[x, y]| [x.clamp(-2, 2), y.clamp(-2, 2)]).collect();
        e.push([0, 0]);
        let e = cosets_of_cells(&space, &e);
        let g = geometry::geometry(&space, &a, &e).unwrap();
        prop_assert!(g.interior.is_subset(&a));
        prop_assert!(a.is_subset(&g.closure));
        let diff: CellSet<_> = g.closure.difference(&g.interior).cloned().collect();
        prop_assert_eq!(g.boundary, diff);
    }

    #[test]
    fn life_is_equivariant(states in prop::collection::vec(0u8..2, 25), g in isometry()) {
        let space = P4m::default();
        let ca = rules::life(space.clone()).unwrap();
        let window: CellSet<[i64; 2]> = (0..5).flat_map(|x| (0..5).map(move |y| [x, y])).collect();
        let p = Pattern::new(window.into_iter().collect(), states).unwrap();
        let lhs = ca.restricted_step(&induced_left_action(&space, &g, &p).unwrap()).unwrap();
        let rhs = induced_left_action(&space, &g, &ca.restricted_step(&p).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn eca_first_missing_is_garden_of_eden(k in any::<u8>(), width in 1usize..7) {
        let z = Lattice::<1>::new();
        let ca = rules::eca(z.clone(), k).unwrap();
        let f = z.cube(0, width as i64);
        let image = image_patterns(&ca, &f, 1 << 16).unwrap();
        prop_assert!(image.count() <= image.total());
        if let Some(p) = image.first_missing() {
            prop_assert!(!image.contains(&p));
            prop_assert!(verify_goe_pattern(&ca, &p, 1 << 16).unwrap());
        } else {
            prop_assert!(image.is_complete());
        }
    }

    #[test]
    fn image_counts_grow_with_the_window(k in any::<u8>()) {
        let z = Lattice::<1>::new();
        let ca = rules::eca(z.clone(), k).unwrap();
        let mut last = 1;
        for (_, f) in Schedule::range(1, 8).windows(&z).unwrap() {
            let count = image_patterns(&ca, &f, 1 << 16).unwrap().count();
            prop_assert!(count >= last);
            prop_assert!(count <= 2 * last);
            last = count;
        }
    }

    #[test]
    fn schedules_round_trip(lo in 1usize..20, len in 0usize..20, list in prop::collection::vec(1usize..50, 1..6)) {
        let range = Schedule::range(lo, lo + len);
        prop_assert_eq!(range.to_string().parse::<Schedule>().unwrap(), range);
        let text = list.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",");
        let parsed: Schedule = text.parse().unwrap();
        prop_assert_eq!(parsed.indices(), list.as_slice());
        prop_assert_eq!(parsed.to_string().parse::<Schedule>().unwrap(), parsed);
    }

    #[test]
    fn rule_tables_match_eval(k in 0u8..64, states in prop::collection::vec(0u8..2, 3)) {
        let ca = rules::ring_symmetric(Dihedral::new(5).unwrap(), k).unwrap();
        let idx = states.iter().fold(0usize, |acc, &s| 2 * acc + s as usize);
        prop_assert_eq!(ca.rule().eval(&states), ca.rule().table()[idx]);
    }

    #[test]
    fn steps_are_local(a in cells2(30), left in prop::collection::vec(0u8..2, 81), right in prop::collection::vec(0u8..2, 81)) {
        let z2 = Lattice::<2>::new();
        let ca = rules::life(z2.clone()).unwrap();
        let window = z2.cube(-4, 5);
        // agree on A, arbitrary elsewhere
        let c = Pattern::new(window.iter().cloned().collect(), left.clone()).unwrap();
        let states = window.iter().zip(left.iter().zip(&right)).map(|(m, (&l, &r))| if a.contains(m) { l } else { r }).collect();
        let d = Pattern::new(window.iter().cloned().collect(), states).unwrap();
        let (sc, sd) = (ca.restricted_step(&c).unwrap(), ca.restricted_step(&d).unwrap());
        let region = geometry::margin(&z2, &a, ca.neighbourhood()).unwrap();
        for m in geometry::interior(&z2, &a, ca.neighbourhood(), &region).unwrap() {
            prop_assert_eq!(sc.get(&m), sd.get(&m));
        }
    }

    #[test]
    fn neighbourhoods_avoid_or_stay_in_the_closure(a in cells2(12), coords in coordinates()) {
        let space = P4m::new(coords);
        let ca = rules::life(space.clone()).unwrap();
        let n = ca.neighbourhood();
        let n_prime = derive_n_prime(&space, n);
        let outer = geometry::geometry(&space, &a, &n_prime).unwrap().closure;
        for m in space.margin_region(&outer, 2).unwrap() {
            let image = geometry::semi_image(&space, &m, n).unwrap();
            prop_assert!(image.iter().all(|x| !a.contains(x)) || image.iter().all(|x| outer.contains(x)));
        }
    }

    #[test]
    fn right_semi_action_is_transporter_action(g in isometry(), states in prop::collection::vec(0u8..3, 9), coords in coordinates()) {
        let space = P4m::new(coords);
        let m = space.act(&g, &space.origin()).unwrap();
        let domain: Vec<[i64; 2]> = (-1..=1).flat_map(|x| (-1..=1).map(move |y| [x, y])).collect();
        let p = Pattern::new(domain, states).unwrap();
        prop_assert_eq!(
            induced_right_semi_action(&space, &m, &p).unwrap(),
            induced_left_action(&space, &space.transporter(&m), &p).unwrap()
        );
    }
}
