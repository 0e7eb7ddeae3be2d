use super::{overhead_averages, OverheadRow, ReportRow};
use std::fmt::Write as _;

const COMPONENTS: [(&str, &str); 6] = [
    ("stack", "#4c72b0"),
    ("ftl", "#dd8452"),
    ("nand", "#55a868"),
    ("bus", "#c44e52"),
    ("dram", "#8172b3"),
    ("crypto", "#937860"),
];

pub fn rows_csv(rows: &[ReportRow]) -> String {
    let mut out = String::from(
        "scenario,operation,algorithm,size_bytes,placement,stack_us,ftl_us,nand_us,bus_us,dram_us,crypto_us,total_us,total_ms,bounds_ms,bound_met\n",
    );
    for r in rows {
        let b = &r.breakdown;
        let bounds: Vec<String> = r.bounds.iter().map(|b| format!("{}:{}", b.limit_ms, b.met)).collect();
        let met = r.bound_met().map_or(String::new(), |m| m.to_string());
        let _ = writeln!(
            out,
            "{},{},{},{},{},{:.3},{:.3},{:.3},{:.3},{:.3},{:.3},{:.3},{:.4},{},{}",
            r.scenario,
            r.operation,
            r.algorithm,
            r.size,
            r.placement,
            b.stack_us,
            b.ftl_us,
            b.nand_us,
            b.bus_us,
            b.dram_us,
            b.crypto_us,
            b.total_us,
            r.total_ms,
            bounds.join(";"),
            met
        );
    }
    out
}

pub fn overhead_csv(rows: &[OverheadRow]) -> String {
    let mut out = String::from("workload,algorithm,size_bytes,fresh_ms,steady_ms,overhead_pct\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{},{:.4},{:.4},{:.2}", r.workload, r.algorithm, r.size, r.fresh_ms, r.steady_ms, r.overhead_pct());
    }
    for (w, avg) in overhead_averages(rows) {
        let _ = writeln!(out, "{w},average,,,,{avg:.2}");
    }
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Horizontal stacked bars, one per row, components in breakdown order.
pub fn rows_svg(rows: &[ReportRow], title: &str) -> String {
    let (left, bar_h, gap, width) = (260.0, 14.0, 6.0, 560.0);
    let max = rows.iter().map(|r| r.breakdown.total_us).fold(0.0f64, f64::max).max(1e-9);
    let height = 60.0 + rows.len() as f64 * (bar_h + gap);
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{height}" font-family="sans-serif" font-size="11">"#, left + width + 120.0);
    let _ = writeln!(s, r#"<text x="10" y="18" font-size="14">{} (total latency, us)</text>"#, escape(title));
    for (i, (name, color)) in COMPONENTS.iter().enumerate() {
        let x = left + i as f64 * 80.0;
        let _ = writeln!(s, r#"<rect x="{x}" y="28" width="10" height="10" fill="{color}"/><text x="{}" y="37">{name}</text>"#, x + 14.0);
    }
    for (i, r) in rows.iter().enumerate() {
        let y = 50.0 + i as f64 * (bar_h + gap);
        let label = format!("{} {} {} {}", r.operation, r.algorithm, r.size, r.placement);
        let _ = writeln!(s, r#"<text x="10" y="{}">{}</text>"#, y + bar_h - 3.0, escape(&label));
        let b = &r.breakdown;
        let parts = [b.stack_us, b.ftl_us, b.nand_us, b.bus_us, b.dram_us, b.crypto_us];
        let mut x = left;
        for (v, (_, color)) in parts.iter().zip(COMPONENTS) {
            let w = v / max * width;
            if w > 0.0 {
                let _ = writeln!(s, r#"<rect x="{x:.2}" y="{y}" width="{w:.2}" height="{bar_h}" fill="{color}"/>"#);
            }
            x += w;
        }
        let _ = writeln!(s, r#"<text x="{:.2}" y="{}">{:.1}</text>"#, x + 4.0, y + bar_h - 3.0, b.total_us);
    }
    s.push_str("</svg>\n");
    s
}

/// Overhead bars per workload and algorithm.
pub fn overhead_svg(rows: &[OverheadRow]) -> String {
    let (left, bar_h, gap, width) = (220.0, 14.0, 6.0, 520.0);
    let max = rows.iter().map(|r| r.overhead_pct().abs()).fold(0.0f64, f64::max).max(1e-9);
    let height = 40.0 + rows.len() as f64 * (bar_h + gap);
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{height}" font-family="sans-serif" font-size="11">"#, left + width + 80.0);
    let _ = writeln!(s, r#"<text x="10" y="18" font-size="14">steady-state overhead (%)</text>"#);
    for (i, r) in rows.iter().enumerate() {
        let y = 30.0 + i as f64 * (bar_h + gap);
        let pct = r.overhead_pct();
        let w = pct.max(0.0) / max * width;
        let _ = writeln!(s, r#"<text x="10" y="{}">{} {}</text>"#, y + bar_h - 3.0, escape(&r.workload), escape(&r.algorithm));
        let _ = writeln!(s, r##"<rect x="{left}" y="{y}" width="{w:.2}" height="{bar_h}" fill="#dd8452"/>"##);
        let _ = writeln!(s, r#"<text x="{:.2}" y="{}">{pct:.1}</text>"#, left + w + 4.0, y + bar_h - 3.0);
    }
    s.push_str("</svg>\n");
    s
}
