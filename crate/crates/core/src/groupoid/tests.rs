use super::*;
use crate::group::{
    BoundaryAction, BoundaryPoint, Cyclic, FreeGroup, Group, Lattice, Perm, PermGroup, Word,
};

fn flip() -> ActionGroupoid<Cyclic, FiniteAction> {
    let action = FiniteAction::from_tables(2, &[vec![1, 0]]).unwrap();
    ActionGroupoid::new(Cyclic::new(2), action)
}

#[test]
fn flip_composition_gives_unit() {
    let g = flip();
    let s = Cyclic::new(2).elem(1);
    let a = g.morphism(s, 1);
    let b = g.morphism(s, 0);
    assert_eq!(a.to_string(), "(0;1;1)");
    assert_eq!(g.compose(&a, &b).unwrap(), g.unit(&0));
    assert!(matches!(
        g.compose(&a, &a),
        Err(Error::NonComposable { .. })
    ));
}

#[test]
fn free_group_labels_reduce() {
    let g = GroupGroupoid::new(FreeGroup::new(2));
    let x = g.parse_morphism("a").unwrap();
    let y = g.parse_morphism("Ab").unwrap();
    assert_eq!(g.compose(&x, &y).unwrap().to_string(), "b");
    assert_eq!(g.invert(&g.parse_morphism("aB").unwrap()).to_string(), "bA");
}

#[test]
fn relation_composition() {
    let r = RelationGroupoid::new(vec![vec![1, 2, 3]]).unwrap();
    let xy = r.morphism(1, 2).unwrap();
    let yz = r.morphism(2, 3).unwrap();
    assert_eq!(r.compose(&xy, &yz).unwrap(), r.morphism(1, 3).unwrap());
}

#[test]
fn action_inverse() {
    let f = FreeGroup::new(2);
    let g = ActionGroupoid::semidirect(f, BoundaryAction { rank: 2 });
    let xi = BoundaryPoint::parse("|a").unwrap();
    let m = g.morphism(Word::parse("b").unwrap(), xi.clone());
    let inv = g.invert(&m);
    assert_eq!(inv.target, xi);
    assert_eq!(inv.label, Word::parse("B").unwrap());
    assert_eq!(inv.source, m.target);
    let u = g.unit(&xi);
    assert_eq!(g.invert(&u), u);
}

#[test]
fn free_ball_sizes() {
    let g = GroupGroupoid::new(FreeGroup::new(2));
    for (r, n) in [(0, 1), (1, 5), (2, 17), (3, 53)] {
        assert_eq!(fiber_ball(&g, &Singleton, r).len(), n);
    }
}

#[test]
fn flip_fiber_at_zero() {
    // G^0 consists of morphisms with target 0.
    let g = flip();
    let ball: Vec<String> = fiber_ball(&g, &0, 1)
        .iter()
        .map(|m| m.to_string())
        .collect();
    assert_eq!(ball, ["(0;0;0)", "(0;1;1)"]);
    assert_eq!(fiber_ball(&g, &1, 0), vec![g.unit(&1)]);
}

#[test]
fn fiber_ball_is_monotone() {
    let g = GroupGroupoid::new(Lattice::new(2));
    let small = fiber_ball(&g, &Singleton, 3);
    let large = fiber_ball(&g, &Singleton, 5);
    assert_eq!(&large[..small.len()], &small[..]);
    assert_eq!(large, fiber_ball(&g, &Singleton, 5));
    assert_eq!(large.len(), 61);
}

#[test]
fn structure_laws_on_radius_three_balls() {
    let free = GroupGroupoid::new(FreeGroup::new(2));
    assert!(check_structure(&free, &[Singleton], 3).passed());
    let flip = flip();
    assert!(check_structure(&flip, &[0, 1], 3).passed());
    let rel = RelationGroupoid::new(vec![vec![0, 1, 2], vec![3]]).unwrap();
    assert!(check_structure(&rel, &rel.objects().unwrap(), 3).passed());
    let bd = ActionGroupoid::semidirect(FreeGroup::new(2), BoundaryAction { rank: 2 });
    let ends = ["|a", "b|a", "|ab"].map(|s| BoundaryPoint::parse(s).unwrap());
    let report = check_structure(&bd, &ends, 2);
    assert!(report.passed(), "{:?}", report.failures);
    let cov = CoveringGroupoid::full(Cyclic::new(3), 3);
    assert!(check_structure(&cov, &[0, 2], 2).passed());
}

#[test]
fn action_groupoid_isotropy_is_stabilizer() {
    let s3 = PermGroup::new(
        3,
        vec![
            Perm::from_images(&[1, 0, 2]).unwrap(),
            Perm::from_images(&[1, 2, 0]).unwrap(),
        ],
    )
    .unwrap();
    let action = FiniteAction::new(3, s3.gens().to_vec()).unwrap();
    check_action(&s3, &action, DEFAULT_ACTION_CHECK_DEPTH).unwrap();
    let g = ActionGroupoid::new(s3.clone(), action);
    for x in 0..3 {
        let mut labels: Vec<Perm> = isotropy(&g, &x, 3).into_iter().map(|m| m.label).collect();
        labels.sort();
        let mut stab: Vec<Perm> = s3
            .elements()
            .into_iter()
            .filter(|p| p.apply(x) == x)
            .collect();
        stab.sort();
        assert_eq!(labels, stab);
    }
}

#[test]
fn ill_formed_action_is_rejected() {
    // Z/3 cannot act on two points by a transposition.
    let bad = FiniteAction::from_tables(2, &[vec![1, 0]]).unwrap();
    assert!(matches!(
        check_action(&Cyclic::new(3), &bad, 4),
        Err(Error::IllFormedAction(_))
    ));
    let text = "kind = \"action\"\npoints = 2\ngenerators = [[1, 0]]\n[group]\ntype = \"cyclic\"\norder = 3\n";
    let desc = GroupoidDescription::from_toml(text).unwrap();
    assert!(matches!(
        build_groupoid(&desc),
        Err(Error::IllFormedAction(_))
    ));
}

#[test]
fn descriptions_build_and_round_trip() {
    let group =
        GroupoidDescription::from_toml("kind = \"group\"\n[group]\ntype = \"free\"\nrank = 2\n")
            .unwrap();
    let g = build_groupoid(&group).unwrap();
    assert_eq!(g.objects().unwrap(), vec![AnyObject::Unit]);
    assert!(check_structure(&g, &[AnyObject::Unit], 3).passed());

    let rel = GroupoidDescription::Relation {
        partition: vec![vec![1, 2], vec![3]],
    };
    match build_groupoid(&rel).unwrap() {
        AnyGroupoid::Relation(r) => assert_eq!(r.morphism_count(), 5),
        other => panic!("unexpected {other:?}"),
    }

    let semi = GroupoidDescription::Semidirect { rank: 2 };
    let g = build_groupoid(&semi).unwrap();
    assert_eq!(g.kind(), GroupoidKind::Semidirect);
    let xi = g.parse_object("|a").unwrap();
    for m in fiber_ball(&g, &xi, 2) {
        let AnyMorphism::Semidirect(m) = &m else {
            panic!()
        };
        assert_eq!(m.source.translate(&m.label), m.target);
    }

    for d in [
        group,
        rel,
        semi,
        GroupoidDescription::Action {
            group: crate::group::GroupSpec::Cyclic { order: 2 },
            points: 2,
            generators: vec![vec![1, 0]],
            check_depth: 4,
        },
    ] {
        assert_eq!(GroupoidDescription::from_toml(&d.to_toml()).unwrap(), d);
    }
}

#[test]
fn morphism_text_round_trips() {
    let g = flip();
    for m in fiber_ball(&g, &0, 2) {
        assert_eq!(g.parse_morphism(&m.to_string()).unwrap(), m);
    }
    let cov = CoveringGroupoid::full(Lattice::new(2), 2);
    for m in fiber_ball(&cov, &1, 2) {
        assert_eq!(cov.parse_morphism(&m.to_string()).unwrap(), m);
    }
}

#[test]
fn counting_haar_is_invariant() {
    let free = GroupGroupoid::new(FreeGroup::new(2));
    let r = haar_invariance_check(&free, &HaarSystem::counting(), &[Singleton], 2);
    assert_eq!(r.max_discrepancy, 0.0);
    assert!(r.pairs_checked > 0);
    let rel = RelationGroupoid::new(vec![vec![1, 2], vec![3]]).unwrap();
    let r = haar_invariance_check(&rel, &HaarSystem::counting(), &[1, 2, 3], 2);
    assert_eq!(r.max_discrepancy, 0.0);
}

#[test]
fn corrupted_haar_weight_is_detected() {
    let rel = RelationGroupoid::new(vec![vec![1, 2], vec![3]]).unwrap();
    let bad = HaarSystem::counting().with_weight(rel.morphism(1, 2).unwrap(), 2.0);
    let r = haar_invariance_check(&rel, &bad, &[1, 2, 3], 2);
    assert_eq!(r.max_discrepancy, 1.0);
    assert!(r.worst.is_some());
}

#[test]
fn action_graph_support() {
    let f = FreeGroup::new(1);
    let action = FiniteAction::from_tables(2, &[vec![1, 0]]).unwrap();
    let cov = CoveringGroupoid::new(f, 2, Support::ActionGraph(action)).unwrap();
    let a = f.letter(crate::group::Letter::new(0, false));
    assert!(cov.morphism(0, 1, a.clone()).is_ok());
    assert!(cov.morphism(0, 0, a).is_err());
    for m in fiber_ball(&cov, &0, 3) {
        assert!(cov.contains(&m));
    }
}
