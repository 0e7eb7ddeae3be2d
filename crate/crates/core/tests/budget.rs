use flashvault::budget::{
    max_engines, program_power, round2, scale_node, Binding, BudgetData, BudgetError, ComponentBudget, PowerParams,
};

#[test]
fn programming_power_figures() {
    let p6 = PowerParams { i_program_ma: 13.8, v_max: 3.6, efficiency_gain: 0.0 };
    assert_eq!(round2(program_power(&p6).unwrap()), 49.68);
    let p7 = PowerParams { efficiency_gain: 0.16, ..p6 };
    assert_eq!(round2(program_power(&p7).unwrap()), 41.73);
    assert!(program_power(&PowerParams { i_program_ma: 0.0, ..p6 }).is_err());
    assert!(program_power(&PowerParams { v_max: -1.0, ..p6 }).is_err());
}

#[test]
fn engine_count_from_shipped_budgets() {
    let data = BudgetData::shipped();
    let report = data.plan("text").unwrap();
    assert_eq!(round2(report.area_budget_mm2), 20.60);
    assert_eq!(round2(report.power_budget_mw), 41.73);
    assert_eq!(report.count.n, 2);
    assert_eq!(report.count.binding, Binding::Power);
    assert_eq!((report.engine.area_mm2, report.engine.power_mw), (0.18, 18.87));
    assert_eq!(data.plan("table-total").unwrap().count.n, 2);
    assert!(data.plan("missing").is_err());
}

#[test]
fn engine_count_edge_cases() {
    assert_eq!(max_engines(20.60, 41.73, 0.18, 50.0).unwrap().n, 0);
    let area_bound = max_engines(0.5, 1e6, 0.18, 18.87).unwrap();
    assert_eq!((area_bound.n, area_bound.binding), (2, Binding::Area));
    assert_eq!(max_engines(0.54, 1e6, 0.18, 1.0).unwrap().n, 3);
    assert!(matches!(max_engines(1.0, 1.0, 0.0, 1.0), Err(BudgetError::NonPositive(_))));
    assert!(max_engines(1.0, 1.0, 1.0, 0.0).is_err());
}

#[test]
fn engine_count_is_monotone() {
    let mut prev = 0;
    for step in 0..200 {
        let n = max_engines(0.1 * step as f64, 41.73, 0.18, 18.87).unwrap().n;
        assert!(n >= prev);
        prev = n;
    }
    let mut prev = u32::MAX;
    for step in 1..200 {
        let n = max_engines(20.6, 41.73, 0.18, 0.5 * step as f64).unwrap().n;
        assert!(n <= prev);
        prev = n;
    }
}

#[test]
fn node_scaling() {
    let data = BudgetData::shipped();
    let ace = data.rows("top").find(|r| r.config.contains("Asymmetric")).unwrap().reconciled();
    assert_eq!(scale_node(&ace, 14, 14, &data.scaling).unwrap(), ace);
    let f = data.scaling.iter().find(|f| (f.from_nm, f.to_nm) == (65, 14)).unwrap();
    let s = scale_node(&ace, 65, 14, &data.scaling).unwrap();
    assert_eq!(s, ComponentBudget { area_um2: ace.area_um2 * f.area, power_mw: ace.power_mw * f.power });
    assert_eq!(scale_node(&ace, 90, 7, &data.scaling), Err(BudgetError::MissingFactor { from: 90, to: 7 }));
}

#[test]
fn published_table_keeps_its_inconsistencies() {
    let data = BudgetData::shipped();
    let bce_total = data.rows("bce").find(|r| r.total).unwrap();
    assert_eq!(bce_total.area_um2, 42616.21);
    let parts = data.sum_parts("bce", false);
    assert!((bce_total.reconciled().area_um2 - parts.area_um2).abs() < 0.01);
    // Sixteen lanes of the reconciled engine match the array row.
    let array = data.rows("top").find(|r| r.config.contains("Block Cipher")).unwrap();
    assert!((16.0 * bce_total.reconciled().area_um2 - array.area_um2).abs() < 1.0);
    let engine = data.sum_parts("top", true);
    assert_eq!(round2(engine.area_um2 / 1e6), 0.18);
    let top = data.rows("top").find(|r| r.total).unwrap();
    assert_eq!(top.power_mw, 20.71);
    assert_eq!(top.area_um2, 54991.89);
    let all = data.sum_parts("top", false);
    assert!((top.reconciled().area_um2 - all.area_um2).abs() < 0.01);
}

#[test]
fn die_geometry_contract() {
    let data = BudgetData::shipped();
    let die = data.die;
    assert!((die.peripheral() - (die.d6 - die.d7)).abs() < 1e-12);
    let mut bad = die;
    bad.m = 1.0;
    assert_eq!(bad.available(), Err(BudgetError::NegativeArea));
}
