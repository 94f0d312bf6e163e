use blockalg::lattice::map_lattice;
use blockalg::rat::rat;
use blockalg::{GroupHom, GroupTag, Lattice, Rat, ShearScale, Vec2};
use proptest::prelude::*;

fn arb_rat() -> impl Strategy<Value = Rat> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

fn arb_nonzero() -> impl Strategy<Value = Rat> {
    arb_rat().prop_filter("nonzero", |r| !r.is_zero())
}

fn arb_vec() -> impl Strategy<Value = Vec2> {
    (arb_rat(), arb_rat()).prop_map(|(c1, c2)| Vec2 { c1, c2 })
}

fn arb_lattice() -> impl Strategy<Value = Lattice> {
    prop::collection::vec(arb_vec(), 0..=3).prop_map(Lattice::new)
}

fn arb_member(lat: &Lattice) -> impl Strategy<Value = Vec2> {
    let lat = lat.clone();
    prop::collection::vec(-4i64..=4, lat.rank()).prop_map(move |k| lat.point(&k))
}

proptest! {
    #[test]
    fn membership_is_closed((lat, v, w) in arb_lattice().prop_flat_map(|l| (Just(l.clone()), arb_member(&l), arb_member(&l)))) {
        prop_assert!(lat.contains(&v));
        prop_assert!(lat.contains(&v.add(&w)));
        prop_assert!(lat.contains(&v.neg()));
    }

    #[test]
    fn generators_are_members(gens in prop::collection::vec(arb_vec(), 0..=3)) {
        let lat = Lattice::new(gens.clone());
        for g in &gens {
            prop_assert!(lat.contains(g));
        }
    }

    #[test]
    fn rebuilding_from_basis_is_idempotent(lat in arb_lattice()) {
        let again = Lattice::new(lat.basis());
        prop_assert_eq!(again.basis(), lat.basis());
        prop_assert_eq!(again, lat);
    }

    #[test]
    fn canonical_form_is_an_orbit_invariant(
        lat in arb_lattice(),
        a in arb_nonzero(),
        b in arb_rat(),
        g2 in any::<bool>(),
    ) {
        let (group, b) = if g2 { (GroupTag::G2, Rat::zero()) } else { (GroupTag::G1, b) };
        let g = ShearScale::new(a, b, group).unwrap();
        let image = map_lattice(&g.as_shear_map(), &lat).unwrap();
        prop_assert_eq!(image.canonical_form(group), lat.canonical_form(group));
    }

    #[test]
    fn hom_eval_is_additive(
        (lat, v, w) in arb_lattice().prop_flat_map(|l| (Just(l.clone()), arb_member(&l), arb_member(&l))),
        values in prop::collection::vec(arb_rat(), 2),
    ) {
        let mu = GroupHom::new(values[..lat.rank()].to_vec());
        let sum = mu.eval(&lat, &v.add(&w)).unwrap();
        prop_assert_eq!(sum, &mu.eval(&lat, &v).unwrap() + &mu.eval(&lat, &w).unwrap());
    }

    #[test]
    fn zero_projection_iff_basis_coordinate_vanishes(lat in arb_lattice(), p in 1u8..=2) {
        let zero = lat.proj_generator(p).is_zero();
        prop_assert_eq!(zero, lat.basis().iter().all(|b| b.coord(p).is_zero()));
    }
}
