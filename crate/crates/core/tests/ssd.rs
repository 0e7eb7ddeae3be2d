use flashvault::bce::CipherId;
use flashvault::calib::Calibration;
use flashvault::ssd::{trace_csv, Event, FtlError, IoOp, IoRequest, Placement, Ssd, SsdConfig, SsdError, TRACE_CSV_HEADER};

fn drive() -> Ssd {
    Ssd::new(SsdConfig::default(), Calibration::default()).unwrap()
}

fn tiny_config() -> SsdConfig {
    SsdConfig { channels: 1, packages: 1, dies: 1, planes: 1, blocks: 16, boot_region_blocks: 1, ..SsdConfig::default() }
}

fn req(op: IoOp, lba: u64, bytes: u64, crypto: Option<CipherId>, placement: Placement) -> IoRequest {
    IoRequest { op, lba, bytes, crypto, placement }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() < 1e-3
}

fn ftl_us(calib: &Calibration, bytes: f64) -> f64 {
    calib.ssd.ftl_coeff_us * (bytes / 1024.0).powf(calib.ssd.ftl_exponent)
}

#[test]
fn plain_page_read_is_the_sum_of_its_stages() {
    let mut ssd = drive();
    let calib = ssd.calibration().clone();
    let cfg = ssd.config().clone();
    let b = ssd.submit_io(&req(IoOp::Read, 0, 4096, None, Placement::Fv)).unwrap();
    let pcie = calib.host.transfer_us_per_kib * 4.0;
    let expected = cfg.stack_us + ftl_us(&calib, 4096.0) + cfg.t_r_us + cfg.t_rcbsy_us + calib.ssd.ldpc_us_per_page + 2.56 + pcie;
    assert!(close(cfg.page_bus_us(), 2.56));
    assert!(close(b.total_us, expected), "{} vs {expected}", b.total_us);
    assert!(close(b.total_us, b.component_sum()));
    assert!(close(b.stack_us, 5.0));
    assert!(close(b.bus_us, 2.56 + pcie));
}

#[test]
fn one_kib_front_end_costs_four_point_six() {
    let mut ssd = drive();
    let b = ssd.submit_io(&req(IoOp::Read, 0, 1024, None, Placement::Fv)).unwrap();
    assert!(close(b.ftl_us, 4.6), "{}", b.ftl_us);
}

#[test]
fn zero_bytes_and_out_of_range_addresses_are_rejected() {
    let mut ssd = drive();
    assert_eq!(ssd.submit_io(&req(IoOp::Read, 0, 0, None, Placement::Fv)), Err(SsdError::ZeroBytes));
    let limit = ssd.ftl().logical_pages();
    let err = ssd.submit_io(&req(IoOp::Program, limit - 1, 8192, None, Placement::Fv)).unwrap_err();
    assert!(matches!(err, SsdError::Ftl(FtlError::IllegalLba { .. })), "{err:?}");
    let ok = ssd.submit_io(&req(IoOp::Read, 0, 4096, None, Placement::Fv));
    assert!(ok.is_ok(), "drive stays usable after a rejected request");
}

#[test]
fn engine_must_hold_the_requested_cipher() {
    let mut ssd = drive();
    let r = req(IoOp::Read, 0, 4096, Some(CipherId::Sm4), Placement::Fv);
    assert!(matches!(ssd.submit_io(&r), Err(SsdError::AlgorithmNotLoaded { .. })));
    ssd.reconfigure_algorithm("sm4").unwrap();
    assert!(ssd.submit_io(&r).is_ok());
}

fn busy_intervals(events: &[Event], label: &str) -> Vec<(u64, u64, String)> {
    let mut open = std::collections::HashMap::new();
    let mut out = Vec::new();
    for e in events.iter().filter(|e| e.label == label) {
        match e.action {
            "start" => {
                open.insert((e.resource.clone(), e.request), e.time_ns);
            }
            "end" => {
                let s = open.remove(&(e.resource.clone(), e.request)).expect("end follows start");
                out.push((s, e.time_ns, e.resource.clone()));
            }
            _ => {}
        }
    }
    out
}

#[test]
fn striped_program_overlaps_array_time() {
    let mut ssd = drive();
    let cfg = ssd.config().clone();
    let out = ssd.run_scenario_batch(&[req(IoOp::Program, 0, 256 * 1024, None, Placement::Fv)]).unwrap();
    let progs = busy_intervals(&out.events, "program");
    assert_eq!(progs.len(), 64);
    let planes: std::collections::BTreeSet<_> = progs.iter().map(|p| p.2.clone()).collect();
    assert_eq!(planes.len(), 64, "each page lands on its own plane");
    let overlapping = progs.iter().enumerate().any(|(i, a)| progs[i + 1..].iter().any(|b| a.0 < b.1 && b.0 < a.1));
    assert!(overlapping);
    let serial = 64.0 * (cfg.t_prog_us + cfg.t_pcbsy_us + cfg.page_bus_us());
    assert!(out.breakdowns[0].total_us < serial / 10.0, "{} vs serial {serial}", out.breakdowns[0].total_us);
}

#[test]
fn channels_are_striped_first() {
    let cfg = SsdConfig::default();
    let chans: Vec<u32> = (0..4).map(|k| cfg.channel_of_die(cfg.die_of_plane(cfg.stripe_plane(k)))).collect();
    assert_eq!(chans, vec![0, 1, 2, 3]);
}

#[test]
fn traces_are_reproducible_and_time_ordered() {
    let batch = [
        req(IoOp::Program, 0, 64 * 1024, Some(CipherId::Aes), Placement::Fv),
        req(IoOp::Read, 512, 32 * 1024, Some(CipherId::Aes), Placement::Ncp),
        req(IoOp::Read, 2048, 8 * 1024, Some(CipherId::Aes), Placement::Cpu),
    ];
    let run = || {
        let mut ssd = drive();
        ssd.reconfigure_algorithm("aes").unwrap();
        ssd.run_scenario_batch(&batch).unwrap()
    };
    let (a, b) = (run(), run());
    assert_eq!(a, b);
    assert!(a.events.windows(2).all(|w| (w[0].time_ns, w[0].seq) < (w[1].time_ns, w[1].seq)));
    let rows: Vec<(u32, _)> = a.breakdowns.iter().copied().enumerate().map(|(i, x)| (i as u32, x)).collect();
    let csv = trace_csv(&a.events, &rows);
    assert!(csv.starts_with(TRACE_CSV_HEADER));
    assert_eq!(csv, trace_csv(&b.events, &rows));
}

#[test]
fn in_die_crypto_is_fastest_for_every_cipher() {
    for cipher in CipherId::ALL {
        for op in [IoOp::Program, IoOp::Read] {
            let totals: Vec<f64> = [Placement::Fv, Placement::Ncp, Placement::Cpu]
                .iter()
                .map(|&p| {
                    let mut ssd = drive();
                    ssd.reconfigure_algorithm(cipher.key()).unwrap();
                    ssd.submit_io(&req(op, 0, 256 * 1024, Some(cipher), p)).unwrap().total_us
                })
                .collect();
            assert!(totals[0] <= totals[1] && totals[1] <= totals[2], "{cipher} {op:?} {totals:?}");
        }
    }
}

#[test]
fn reconfiguration_switches_the_microprogram() {
    let mut ssd = drive();
    let ack = ssd.reconfigure_algorithm("aes").unwrap();
    assert_eq!(ack.algorithm, CipherId::Aes);
    assert_eq!(ack.latency_ns, 10_000);
    let before = ssd.submit_io(&req(IoOp::Read, 0, 4096, Some(CipherId::Aes), Placement::Fv)).unwrap();
    let t = ssd.now_ns();
    ssd.reconfigure_algorithm("sm4").unwrap();
    assert_eq!(ssd.now_ns() - t, 10_000);
    let after = ssd.submit_io(&req(IoOp::Read, 0, 4096, Some(CipherId::Sm4), Placement::Fv)).unwrap();
    let calib = ssd.calibration();
    let per_page = |c: CipherId| {
        let cycles = 256u64.div_ceil(16) * calib.cipher_cycles(c) + calib.bce.pipeline_fill_cycles;
        cycles as f64 / 200.0
    };
    assert!(close(before.crypto_us, per_page(CipherId::Aes)));
    assert!(close(after.crypto_us, per_page(CipherId::Sm4)));
}

#[test]
fn reconfiguring_to_the_same_cipher_is_idempotent() {
    let mut ssd = drive();
    ssd.reconfigure_algorithm("aes").unwrap();
    let t = ssd.now_ns();
    let n = ssd.stats().reconfigurations;
    ssd.reconfigure_algorithm("aes").unwrap();
    assert_eq!(ssd.active_algorithm(), Some(CipherId::Aes));
    assert_eq!(ssd.now_ns() - t, 10_000);
    assert_eq!(ssd.stats().reconfigurations, n + 1);
}

#[test]
fn unknown_cipher_leaves_the_engine_unchanged() {
    let mut ssd = drive();
    ssd.reconfigure_algorithm("camellia").unwrap();
    let t = ssd.now_ns();
    assert_eq!(ssd.reconfigure_algorithm("rot13"), Err(SsdError::UnknownAlgorithm("rot13".into())));
    assert_eq!(ssd.active_algorithm(), Some(CipherId::Camellia));
    assert_eq!(ssd.now_ns(), t);
}

fn fill_block(ssd: &mut Ssd, lba: u64, pages: u64) {
    ssd.submit_io(&req(IoOp::Program, lba, pages * 4096, None, Placement::Fv)).unwrap();
}

#[test]
fn fully_invalid_victim_only_pays_the_erase() {
    let mut ssd = Ssd::new(tiny_config(), Calibration::default()).unwrap();
    fill_block(&mut ssd, 0, 128);
    fill_block(&mut ssd, 0, 128);
    let r = ssd.gc_step().unwrap();
    assert_eq!(r.relocated, 0);
    assert!(close(r.duration_us, ssd.config().t_erase_us));
    ssd.audit().unwrap();
}

#[test]
fn half_valid_victim_relocation_matches_the_trace() {
    let mut ssd = Ssd::new(tiny_config(), Calibration::default()).unwrap();
    fill_block(&mut ssd, 0, 128);
    fill_block(&mut ssd, 0, 64);
    ssd.set_tracing(true);
    ssd.take_events();
    let r = ssd.gc_step().unwrap();
    assert_eq!(r.relocated, 64);
    let events = ssd.take_events();
    let busy: f64 = ["gc.sense", "gc.cache", "gc.load", "gc.program", "gc.erase"]
        .iter()
        .flat_map(|l| busy_intervals(&events, l))
        .map(|(s, e, _)| (e - s) as f64 / 1000.0)
        .sum();
    let cfg = ssd.config();
    let per_page = cfg.t_r_us + cfg.t_rcbsy_us + cfg.t_pcbsy_us + cfg.t_prog_us;
    assert!(close(busy, 64.0 * per_page + cfg.t_erase_us));
    assert!(close(r.duration_us, busy), "{} vs {busy}", r.duration_us);
    assert!(close(r.duration_us, 64.0 * (45.0 + 3.0 + 3.0 + 400.0) + 2000.0));
    ssd.audit().unwrap();
}

#[test]
fn collection_with_nothing_to_reclaim_reports_it() {
    let mut ssd = Ssd::new(tiny_config(), Calibration::default()).unwrap();
    assert_eq!(ssd.gc_step(), Err(SsdError::NothingToCollect));
}

#[test]
fn wear_leveling_is_idle_below_the_spread() {
    let mut ssd = Ssd::new(tiny_config(), Calibration::default()).unwrap();
    fill_block(&mut ssd, 0, 128);
    fill_block(&mut ssd, 0, 128);
    ssd.gc_step().unwrap();
    assert!(ssd.ftl().wear_spread(0) <= ssd.ftl().wl_threshold());
    assert_eq!(ssd.wear_level_step().unwrap(), 0);
}

#[test]
fn double_buffering_speeds_sequential_reads() {
    let time = |double_buffering| {
        let cfg = SsdConfig { double_buffering, ..tiny_config() };
        let mut ssd = Ssd::new(cfg, Calibration::default()).unwrap();
        ssd.reconfigure_algorithm("aes").unwrap();
        fill_block(&mut ssd, 0, 32);
        ssd.submit_io(&req(IoOp::Read, 0, 32 * 4096, Some(CipherId::Aes), Placement::Fv)).unwrap().total_us
    };
    let (on, off) = (time(true), time(false));
    assert!(on < off, "{on} vs {off}");
}

#[test]
fn tiny_free_pool_collects_on_the_first_program() {
    let mut ssd = Ssd::new(tiny_config(), Calibration::default()).unwrap();
    ssd.make_steady_state(0.99, 2000, 7).unwrap();
    let before = ssd.stats().relocated_pages;
    let fresh = Ssd::new(tiny_config(), Calibration::default()).unwrap().clone().submit_io(&req(IoOp::Program, 0, 4096, None, Placement::Fv)).unwrap();
    let b = ssd.submit_io(&req(IoOp::Program, 0, 4096, None, Placement::Fv)).unwrap();
    assert!(ssd.stats().relocated_pages > before);
    assert!(b.ftl_us > fresh.ftl_us);
    ssd.audit().unwrap();
}

#[test]
fn fill_fraction_must_be_a_proper_fraction() {
    let mut ssd = Ssd::new(tiny_config(), Calibration::default()).unwrap();
    assert_eq!(ssd.make_steady_state(1.0, 0, 1), Err(SsdError::InvalidFill(1.0)));
    assert_eq!(ssd.make_steady_state(0.0, 0, 1), Err(SsdError::InvalidFill(0.0)));
}

#[test]
fn self_encrypting_drive_keeps_only_ciphertext() {
    let cfg = SsdConfig { channels: 2, packages: 1, dies: 1, planes: 2, blocks: 40, boot_region_blocks: 2, ..SsdConfig::default() };
    let mut ssd = Ssd::new(cfg, Calibration::default()).unwrap();
    ssd.reconfigure_algorithm("aes").unwrap();
    ssd.set_self_encryption(true);
    ssd.make_steady_state(0.9, 20_000, 3).unwrap();
    ssd.audit().unwrap();
    assert!(ssd.audit_ciphertext());
    for lba in (0..400).step_by(37) {
        ssd.submit_io(&req(IoOp::Program, lba, 16 * 1024, Some(CipherId::Aes), Placement::Fv)).unwrap();
        ssd.audit().unwrap();
    }
    assert!(ssd.audit_ciphertext());
    assert!(ssd.ftl().erased_total() > 0);
}

#[test]
fn plaintext_write_fails_the_ciphertext_audit() {
    let mut ssd = Ssd::new(tiny_config(), Calibration::default()).unwrap();
    fill_block(&mut ssd, 0, 1);
    assert!(!ssd.audit_ciphertext());
}

#[test]
fn aged_drive_is_slower_than_a_fresh_one() {
    let cfg = SsdConfig { blocks: 64, boot_region_blocks: 2, ..SsdConfig::default() };
    let mut fresh = Ssd::new(cfg, Calibration::default()).unwrap();
    fresh.reconfigure_algorithm("aes").unwrap();
    fresh.set_self_encryption(true);
    let mut aged = fresh.clone();
    aged.make_steady_state(0.9, 50_000, 11).unwrap();
    let r = req(IoOp::Read, 100, 256 * 1024, Some(CipherId::Aes), Placement::Fv);
    let w = req(IoOp::Program, 100, 256 * 1024, Some(CipherId::Aes), Placement::Fv);
    assert!(aged.clone().submit_io(&r).unwrap().total_us > fresh.clone().submit_io(&r).unwrap().total_us);
    assert!(aged.submit_io(&w).unwrap().total_us > fresh.submit_io(&w).unwrap().total_us);
}

#[test]
fn config_parses_from_toml_and_rejects_nonsense() {
    let cfg = SsdConfig::from_toml_str("channels = 2\nt_r_us = 50.0\n").unwrap();
    assert_eq!(cfg.channels, 2);
    assert_eq!(cfg.packages, 4);
    assert!(SsdConfig::from_toml_str("channels = 0\n").is_err());
    assert!(SsdConfig::from_toml_str("warp_drive = true\n").is_err());
    assert!(SsdConfig::from_toml_str("overprovision = 1.5\n").is_err());
}

#[test]
fn placement_names_round_trip() {
    for p in Placement::ALL {
        assert_eq!(p.name().parse::<Placement>().unwrap(), p);
    }
    assert!("gpu".parse::<Placement>().is_err());
}
