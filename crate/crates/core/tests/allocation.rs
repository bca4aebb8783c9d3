mod common;

use common::chernoff_curve;
use hopdetect_core::network::node_distance;
use hopdetect_core::{
    allocate_info_max, allocate_lifetime_max, deploy, form_groups, plan_energy, plan_multihop,
    split_at_fusion, transmit_energy, Deployment, Error, Group, Network, Node, NodeId,
};
use proptest::prelude::*;

fn line(positions: &[f64], fusion: f64, budget: f64) -> Network {
    let nodes = positions
        .iter()
        .enumerate()
        .map(|(i, &p)| Node {
            id: NodeId(i as u32),
            position: p,
        })
        .collect();
    Network::new(nodes, fusion, budget).unwrap()
}

fn bits(a: &hopdetect_core::Allocation) -> Vec<u32> {
    a.iter().map(|(_, b)| b).collect()
}

#[test]
fn info_max_hand_examples() {
    let c = chernoff_curve();
    let r = allocate_info_max(&line(&[0.0, 0.0], 10.0, 200.0), c);
    assert_eq!(bits(&r.allocation), [1, 1]);
    assert_eq!(r.total_energy, 200.0);

    let r = allocate_info_max(&line(&[0.0], 10.0, 300.0), c);
    assert_eq!(bits(&r.allocation), [3]);
    assert_eq!(r.total_energy, 300.0);

    let r = allocate_info_max(&line(&[0.0, 3.0, 7.5], 10.0, 0.0), c);
    assert_eq!(bits(&r.allocation), [0, 0, 0]);
    assert_eq!(r.total_energy, 0.0);
}

#[test]
fn lifetime_max_examples() {
    let net = line(&[0.0, 5.0, 8.0, 9.0], 10.0, 400.0);
    assert_eq!(
        bits(&allocate_lifetime_max(&net, 8).allocation),
        [1, 4, 8, 8]
    );
    assert_eq!(
        bits(&allocate_lifetime_max(&net.with_energy_budget(0.0).unwrap(), 8).allocation),
        [0; 4]
    );
    // d = sqrt(E/L) exactly
    let d = 50f64.sqrt();
    let net = line(&[0.0, 10.0], 10.0 + d, 100.0);
    assert_eq!(allocate_lifetime_max(&net, 8).allocation.get(NodeId(1)), 1);
}

#[test]
fn multihop_hand_examples() {
    let c = chernoff_curve();
    let net = line(&[0.0, 6.0], 10.0, 200.0);
    let plan = form_groups(&net, c).unwrap();
    assert_eq!(
        plan.groups,
        [
            Group {
                chain: vec![NodeId(0)],
                bits: vec![1]
            },
            Group {
                chain: vec![NodeId(1)],
                bits: vec![6]
            }
        ]
    );
    assert_eq!(plan_energy(&plan, &net).unwrap().total, 196.0);

    let net = line(&[0.0, 8.0], 10.0, 72.0);
    let plan = form_groups(&net, c).unwrap();
    assert_eq!(
        plan.groups,
        [Group {
            chain: vec![NodeId(0), NodeId(1)],
            bits: vec![0, 1]
        }]
    );
    assert_eq!(plan_energy(&plan, &net).unwrap().total, 4.0);

    for e in [49.0, 100.0, 130.0, 392.0, 1000.0] {
        let plan = form_groups(&line(&[3.0], 10.0, e), c).unwrap();
        let m = ((e / 49.0).floor() as u32).min(8);
        assert_eq!(
            plan.groups,
            [Group {
                chain: vec![NodeId(0)],
                bits: vec![m]
            }]
        );
    }
}

#[test]
fn plan_energy_arithmetic() {
    let net = line(&[0.0, 3.0], 7.0, 100.0);
    let plan = hopdetect_core::MultihopPlan {
        groups: vec![Group {
            chain: vec![NodeId(0), NodeId(1)],
            bits: vec![1, 1],
        }],
        per_node_share: 50.0,
    };
    let e = plan_energy(&plan, &net).unwrap();
    assert_eq!(e.per_node[&NodeId(0)], 9.0);
    assert_eq!(e.per_node[&NodeId(1)], 32.0);
    assert_eq!(e.total, 41.0);
    assert_eq!(e.delivered[&NodeId(0)], 25.0);
    let empty = hopdetect_core::MultihopPlan {
        groups: vec![],
        per_node_share: 0.0,
    };
    assert!(matches!(
        plan_energy(&empty, &net),
        Err(Error::InconsistentPlan(_))
    ));
}

#[test]
fn split_examples() {
    let net = line(&[0.0, 4.0, 9.0], 5.0, 90.0);
    let (l, r) = split_at_fusion(&net);
    let r = r.unwrap();
    assert_eq!(l.nodes().iter().map(|n| n.id.0).collect::<Vec<_>>(), [0, 1]);
    assert_eq!(r.nodes().iter().map(|n| n.id.0).collect::<Vec<_>>(), [2]);
    assert_eq!((l.energy_budget(), r.energy_budget()), (60.0, 30.0));
    let end = line(&[0.0, 4.0, 9.0], 11.0, 90.0);
    assert_eq!(split_at_fusion(&end), (end.clone(), None));
}

#[test]
fn deployment_conventions() {
    let net = deploy(Deployment::Uniform, 100, 100.0, 2.0, 64000.0, 0).unwrap();
    assert!((net.nodes()[1].position - 100.0 / 99.0).abs() < 1e-12);
    assert_eq!(net.fusion_position(), 102.0);
    assert_eq!(net.distance_to_fusion(&net.nodes()[0]), 102.0);
    let one = deploy(Deployment::Uniform, 1, 0.0, 2.0, 1.0, 0).unwrap();
    assert_eq!(one.distance_to_fusion(&one.nodes()[0]), 2.0);
    let a = deploy(Deployment::RandomUniform, 30, 100.0, 2.0, 10.0, 17).unwrap();
    assert_eq!(
        a,
        deploy(Deployment::RandomUniform, 30, 100.0, 2.0, 10.0, 17).unwrap()
    );
    assert_ne!(
        a,
        deploy(Deployment::RandomUniform, 30, 100.0, 2.0, 10.0, 18).unwrap()
    );
    assert!(deploy(Deployment::Uniform, 0, 1.0, 0.0, 1.0, 0).is_err());
    assert_eq!(transmit_energy(3, 10.0), 300.0);
    assert_eq!(transmit_energy(0, 4.0), 0.0);
    assert_eq!(transmit_energy(1, 8.0), 64.0);
}

fn random_net() -> impl Strategy<Value = Network> {
    (
        prop::collection::vec(0.0f64..100.0, 1..=50),
        0.0f64..5.0,
        0.0f64..80_000.0,
        any::<bool>(),
    )
        .prop_map(|(pos, off, e, middle)| {
            let fusion = if middle {
                pos.iter().sum::<f64>() / pos.len() as f64
            } else {
                100.0 + off
            };
            line(&pos, fusion, e)
        })
}

fn end_net() -> impl Strategy<Value = Network> {
    (
        prop::collection::vec(0.0f64..100.0, 1..=50),
        0.0f64..5.0,
        0.0f64..80_000.0,
    )
        .prop_map(|(pos, off, e)| line(&pos, 100.0 + off, e))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn every_strategy_within_budget(net in random_net()) {
        let c = chernoff_curve();
        let e = net.energy_budget();
        let info = allocate_info_max(&net, c);
        let life = allocate_lifetime_max(&net, 8);
        let plan = plan_multihop(&net, c).unwrap();
        let hop = plan_energy(&plan, &net).unwrap().total;
        prop_assert!(info.total_energy <= e, "info {} > {e}", info.total_energy);
        prop_assert!(life.total_energy <= e, "lifetime {} > {e}", life.total_energy);
        prop_assert!(hop <= e * (1.0 + 1e-12), "multihop {hop} > {e}");
        prop_assert!(info.allocation.covers(&net) && life.allocation.covers(&net));
        prop_assert!(info.allocation.iter().chain(life.allocation.iter()).all(|(_, b)| b <= 8));
    }

    #[test]
    fn groups_partition_nodes(net in random_net()) {
        let plan = plan_multihop(&net, chernoff_curve()).unwrap();
        let mut ids: Vec<u32> = plan.groups.iter().flat_map(|g| g.chain.iter().map(|i| i.0)).collect();
        ids.sort();
        prop_assert_eq!(ids, (0..net.len() as u32).collect::<Vec<_>>());
        prop_assert!(plan.groups.iter().all(|g| g.chain.len() == g.bits.len()));
    }

    #[test]
    fn chains_approach_fusion_and_cost_less(net in end_net()) {
        let plan = form_groups(&net, chernoff_curve()).unwrap();
        let energy = plan_energy(&plan, &net).unwrap();
        for g in &plan.groups {
            let nodes: Vec<&Node> = g.chain.iter().map(|&id| net.node(id).unwrap()).collect();
            for w in nodes.windows(2) {
                prop_assert!(net.distance_to_fusion(w[1]) < net.distance_to_fusion(w[0]));
            }
            for (n, &b) in nodes.iter().zip(&g.bits) {
                let direct = transmit_energy(b, net.distance_to_fusion(n));
                prop_assert!(energy.delivered[&n.id] <= direct * (1.0 + 1e-12) + 1e-9);
            }
        }
    }

    #[test]
    fn per_node_energy_near_share(net in end_net()) {
        let plan = form_groups(&net, chernoff_curve()).unwrap();
        let energy = plan_energy(&plan, &net).unwrap();
        let share = net.per_node_share();
        for g in &plan.groups {
            for (i, &id) in g.chain.iter().enumerate() {
                let n = net.node(id).unwrap();
                let hop = match g.chain.get(i + 1) {
                    Some(&next) => node_distance(n, net.node(next).unwrap()),
                    None => net.distance_to_fusion(n),
                };
                prop_assert!(energy.per_node[&id] <= share + hop * hop + 1e-9);
            }
        }
    }

    #[test]
    fn split_preserves_nodes_and_budget(net in random_net()) {
        let (l, r) = split_at_fusion(&net);
        match r {
            None => prop_assert_eq!(&l, &net),
            Some(r) => {
                prop_assert_eq!(l.len() + r.len(), net.len());
                prop_assert!((l.energy_budget() + r.energy_budget() - net.energy_budget()).abs() <= 1e-9 * net.energy_budget().max(1.0));
                prop_assert!(l.fusion_at_end() && r.fusion_at_end());
            }
        }
    }

    #[test]
    fn info_max_favours_near_nodes(net in end_net()) {
        let a = allocate_info_max(&net, chernoff_curve()).allocation;
        let order = net.by_distance_desc();
        for w in order.windows(2) {
            prop_assert!(a.get(w[0].id) <= a.get(w[1].id), "{:?}", bits(&a));
        }
    }

    #[test]
    fn lifetime_floor_is_tight(net in end_net()) {
        let a = allocate_lifetime_max(&net, 8).allocation;
        let share = net.per_node_share();
        for n in net.nodes() {
            let d = net.distance_to_fusion(n);
            let m = a.get(n.id);
            prop_assert!(transmit_energy(m, d) <= share * (1.0 + 1e-12));
            if m < 8 {
                prop_assert!(transmit_energy(m + 1, d) > share);
            }
        }
    }

    #[test]
    fn allocation_is_deterministic(net in random_net()) {
        let c = chernoff_curve();
        prop_assert_eq!(allocate_info_max(&net, c), allocate_info_max(&net, c));
        prop_assert_eq!(plan_multihop(&net, c).unwrap(), plan_multihop(&net, c).unwrap());
    }
}
