mod common;

use std::io::Write;
use std::net::TcpStream;
use std::thread;

use serde_json::json;
use uavsim::policy::PolicyKind;
use uavsim::{EpisodeConfig, Scenario};

#[test]
fn remote_episode_is_bit_identical_to_local() {
    let cfg = EpisodeConfig { max_steps: 300, ..Default::default() };
    let addr = common::start_server(cfg.clone());
    for scenario in Scenario::ALL {
        let local = common::run_policy(scenario, 17, PolicyKind::Random, &cfg);
        let remote = common::replay_remote(addr, scenario, 17, &local.actions);
        assert_eq!(remote, local.outcomes);
        for (r, l) in remote.iter().zip(&local.outcomes) {
            assert_eq!(r.rewards.evader.to_bits(), l.rewards.evader.to_bits());
        }
        assert_eq!(
            common::export(scenario, &remote, &local.actions),
            common::export(scenario, &local.outcomes, &local.actions)
        );
    }
}

#[test]
fn spec_and_errors_over_the_wire() {
    let addr = common::start_server(EpisodeConfig::default());
    let mut c = common::Client::connect(addr);
    let spec = c.send(&json!({"cmd": "spec"}));
    assert_eq!(spec["observation_dim"], 13);
    assert_eq!(spec["action_dim"], 2);
    assert_eq!(c.send_raw("{not json")["error"], "bad_request");
    assert_eq!(c.send(&json!({"cmd": "step", "actions": {"evader": [0.5, 0.5]}}))["error"], "no_episode");
    let reset = c.reset(Scenario::UavDuel, 3);
    assert_eq!(reset["ok"], true);
    assert_eq!(reset["observations"]["interceptor"].as_array().unwrap().len(), 13);
    assert_eq!(c.send(&json!({"cmd": "step", "actions": {"evader": [0.5]}}))["error"], "bad_action");
    assert_eq!(c.send(&json!({"cmd": "step", "actions": {"evader": [0.5, 0.5]}}))["error"], "bad_action");
    let ok = c.send(&json!({"cmd": "step", "actions": {"evader": [0.6, 0.6], "interceptor": [0.6, 0.6]}}));
    assert_eq!(ok["ok"], true);
    assert_eq!(c.send(&json!({"cmd": "close"}))["closed"], true);
}

#[test]
fn abrupt_disconnect_leaves_server_usable() {
    let addr = common::start_server(EpisodeConfig::default());
    {
        let mut s = TcpStream::connect(addr).unwrap();
        s.write_all(b"{\"cmd\":\"reset\",\"scenario\":2,\"seed\":1}\n{\"cmd\":\"step\",\"act").unwrap();
    }
    let mut c = common::Client::connect(addr);
    assert_eq!(c.reset(Scenario::FlyToPoint, 1)["ok"], true);
}

#[test]
fn concurrent_sessions_are_isolated() {
    let cfg = EpisodeConfig { max_steps: 200, ..Default::default() };
    let addr = common::start_server(cfg.clone());
    let handles: Vec<_> = (0..6u64)
        .map(|i| {
            let cfg = cfg.clone();
            thread::spawn(move || {
                let scenario = Scenario::ALL[i as usize % 3];
                let local = common::run_policy(scenario, 100 + i, PolicyKind::Random, &cfg);
                let remote = common::replay_remote(addr, scenario, 100 + i, &local.actions);
                assert_eq!(remote, local.outcomes);
            })
        })
        .collect();
    for h in handles {
        h.join().unwrap();
    }
}
