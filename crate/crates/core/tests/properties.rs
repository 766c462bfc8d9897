mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use coop_kitchen::agent::policy::dsl::{Atom, Cmp, Cond, Thing};
use coop_kitchen::agent::CommCondition;
use coop_kitchen::env::{
    init_game, restore, snapshot, state_hash, step_in_place, BurgerKind, ControlAction, GameConfig, GameState, Layout, Player,
    ScriptedOrder,
};
use coop_kitchen::metrics::{compute_report, MetricsReport};
use coop_kitchen::prompts::PromptSet;
use coop_kitchen::session::wire::{StateDelta, WireState};
use coop_kitchen::session::{run_with, AgentSide, ChefScript, EpisodeLog, NoisyTeammate, Script, SessionConfig};

fn mock_episode(seed: u64, tom: bool) -> EpisodeLog {
    let cfg = SessionConfig::new(CommCondition::BiComm, tom, seed);
    let agent = AgentSide::llm(cfg.agent_config(), PromptSet::builtin(), cfg.build_gateway().unwrap());
    run_with(&cfg, agent, &mut NoisyTeammate::new(seed, 0.15, 0.04)).unwrap().0
}

fn scripted_episode(seed: u64) -> EpisodeLog {
    let mut script = Script { seed: Some(seed), ..Script::default() };
    script.human = common::random_human_script(seed, 500);
    script.agent = common::random_human_script(seed ^ 0x5eed, 500);
    script.agent.says = script.agent.says.into_keys().map(|t| (t, format!("note {t}"))).collect();
    common::play_script(&script)
}

fn report_invariants(log: &EpisodeLog) -> Result<MetricsReport, TestCaseError> {
    let r = compute_report(log).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let k = r.key_events;
    match r.agent_contribution_rate {
        Some(cr) => {
            let total = (k.agent + k.human) as f64;
            prop_assert!(total > 0.0);
            let human = k.human as f64 / total * 100.0;
            prop_assert!((cr + human - 100.0).abs() < 1e-9, "cr {cr} + {human}");
            prop_assert!((0.0..=100.0).contains(&cr));
        }
        None => prop_assert_eq!(k.agent + k.human, 0),
    }
    prop_assert_eq!(r.message_count.by_template.values().sum::<u32>(), r.message_count.human);
    let f = r.failure_count;
    prop_assert_eq!(f.total, f.missed + f.wrong_serve + f.fires);
    let ledger: i32 = log.history().map(|h| h.reward_delta).sum();
    let by_events: i32 = common::events(log).iter().map(|e| e.reward()).sum();
    prop_assert_eq!(ledger, log.footer.final_score);
    prop_assert_eq!(by_events, log.footer.final_score);
    prop_assert_eq!(r.task_score, log.footer.final_score);
    Ok(r)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn mock_episode_reports_are_consistent(seed in 0u64..10_000, tom in any::<bool>()) {
        let log = mock_episode(seed, tom);
        let r = report_invariants(&log)?;
        prop_assert_eq!(compute_report(&log).unwrap(), r.clone());
        prop_assert_eq!(log.footer.report.as_ref(), Some(&r));

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("episode.json");
        log.save(&path).unwrap();
        let back = EpisodeLog::load(&path).unwrap();
        prop_assert_eq!(back.content_hash(), log.content_hash());
        prop_assert_eq!(compute_report(&back).unwrap(), r);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn scripted_episode_reports_are_consistent(seed in 0u64..100_000) {
        let log = scripted_episode(seed);
        report_invariants(&log)?;
    }
}

// ---------------------------------------------------------------- DSL

fn thing() -> impl Strategy<Value = Thing> {
    prop_oneof![
        Just(Thing::Nothing),
        Just(Thing::Bread),
        Just(Thing::Beef),
        Just(Thing::Lettuce),
        Just(Thing::ChoppedLettuce),
        Just(Thing::Plate),
        Just(Thing::Extinguisher),
        Just(Thing::SpoiledPlate),
        burger().prop_map(Thing::Burger),
    ]
}

fn burger() -> impl Strategy<Value = BurgerKind> {
    prop::sample::select(BurgerKind::ALL.to_vec())
}

fn cmp() -> impl Strategy<Value = Cmp> {
    prop::sample::select(vec![Cmp::Lt, Cmp::Le, Cmp::Gt, Cmp::Ge, Cmp::Eq, Cmp::Ne])
}

fn atom() -> impl Strategy<Value = Atom> {
    prop_oneof![
        Just(Atom::PanEmpty),
        Just(Atom::PanOnFire),
        Just(Atom::PanCooking),
        Just(Atom::BeefReady),
        Just(Atom::BeefOvercooked),
        Just(Atom::LettuceChopped),
        Just(Atom::CutboardEmpty),
        (prop::bool::ANY, thing()).prop_map(|(a, t)| Atom::Holding(if a { Player::Agent } else { Player::Human }, t)),
        thing().prop_map(Atom::CounterHas),
        burger().prop_map(Atom::Order),
        (0u32..500).prop_map(Atom::OrderId),
        (burger(), cmp(), 0i64..600).prop_map(|(k, c, n)| Atom::OrderTimeLeft(k, c, n)),
        (cmp(), 0i64..10).prop_map(|(c, n)| Atom::Orders(c, n)),
        (cmp(), 0i64..600).prop_map(|(c, n)| Atom::Tick(c, n)),
    ]
}

fn cond() -> impl Strategy<Value = Cond> {
    let leaf = prop_oneof![any::<bool>().prop_map(Cond::Const), atom().prop_map(Cond::Atom)];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|c| Cond::Not(Box::new(c))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Cond::And(Box::new(a), Box::new(b))),
            (inner.clone(), inner).prop_map(|(a, b)| Cond::Or(Box::new(a), Box::new(b))),
        ]
    })
}

fn random_state(seed: u64, ticks: u32) -> GameState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = init_game(&Layout::counter_circuit(), &GameConfig::default(), seed);
    for _ in 0..ticks {
        let a = ControlAction::ALL[rng.random_range(0..6)];
        let h = ControlAction::ALL[rng.random_range(0..6)];
        step_in_place(&mut s, a, h).unwrap();
    }
    s
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn conditions_print_and_parse_back(c in cond()) {
        let text = c.to_string();
        let back: Cond = text.parse().map_err(|e| TestCaseError::fail(format!("{text}: {e}")))?;
        prop_assert_eq!(&back, &c, "{}", text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn parsed_conditions_evaluate_like_the_tree(c in cond(), seed in 0u64..1000, ticks in 0u32..200) {
        let s = random_state(seed, ticks);
        let back: Cond = c.to_string().parse().unwrap();
        prop_assert_eq!(back.eval(&s), c.eval(&s));
        prop_assert_eq!(Cond::Not(Box::new(c.clone())).eval(&s), !c.eval(&s));
    }

    #[test]
    fn snapshots_restore_to_the_same_hash(seed in 0u64..1000, ticks in 0u32..300, more in 0u32..40) {
        let s = random_state(seed, ticks);
        let mut r = restore(&snapshot(&s)).unwrap();
        prop_assert_eq!(state_hash(&r), state_hash(&s));
        // The restored copy keeps evolving exactly like the original.
        let mut o = s.clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 1);
        for _ in 0..more {
            let a = ControlAction::ALL[rng.random_range(0..6)];
            let h = ControlAction::ALL[rng.random_range(0..6)];
            step_in_place(&mut o, a, h).unwrap();
            step_in_place(&mut r, a, h).unwrap();
        }
        prop_assert_eq!(state_hash(&r), state_hash(&o));
    }

    #[test]
    fn deltas_carry_one_wire_state_to_another(seed in 0u64..1000, t1 in 0u32..200, gap in 0u32..60) {
        let a = random_state(seed, t1);
        let b = random_state(seed, t1 + gap);
        let (wa, wb) = (WireState::of(&a), WireState::of(&b));
        let delta = StateDelta::between(&wa, &wb);
        let mut patched = wa.clone();
        patched.apply(&delta);
        prop_assert_eq!(&patched, &wb);
        // Through JSON as a client would see it.
        let json = serde_json::to_string(&delta).unwrap();
        let mut patched = wa;
        patched.apply(&serde_json::from_str(&json).unwrap());
        prop_assert_eq!(patched, wb);
    }
}

// ---------------------------------------------------------------- scripts

fn chef_script(agent: bool) -> impl Strategy<Value = ChefScript> {
    let action = prop::sample::select(ControlAction::ALL.iter().copied().filter(|a| *a != ControlAction::Noop).collect::<Vec<_>>());
    let says = if agent {
        // Script text is whitespace-separated, so runs of spaces collapse.
        let words = prop::collection::vec("[A-Za-z0-9,.!?]{1,8}", 1..6).prop_map(|w| w.join(" "));
        prop::collection::btree_map(0u32..500, words, 0..5).boxed()
    } else {
        prop::collection::btree_map(0u32..500, (1u8..=11).prop_map(|n| n.to_string()), 0..5).boxed()
    };
    (prop::collection::btree_map(0u32..500, action, 0..40), says).prop_map(|(actions, says)| ChefScript { actions, says })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn scripts_print_and_parse_back(
        seed in prop::option::of(any::<u64>()),
        orders in prop::collection::vec((0u32..500, burger(), 1u32..600), 0..4),
        agent in chef_script(true),
        human in chef_script(false),
    ) {
        let orders = orders.into_iter().map(|(tick, kind, lifetime)| ScriptedOrder { tick, kind, lifetime }).collect();
        let s = Script { seed, orders, agent, human };
        prop_assert_eq!(Script::parse(&s.to_text()).unwrap(), s);
    }
}

#[test]
fn reports_from_the_same_log_are_equal() {
    let log = scripted_episode(4);
    let a = compute_report(&log).unwrap();
    let b = compute_report(&log).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.csv_row(), b.csv_row());
    assert_eq!(MetricsReport::CSV_HEADER.split(',').count(), a.csv_row().split(',').count());
}
