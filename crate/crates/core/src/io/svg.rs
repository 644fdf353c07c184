//! Minimal transmission-spectrum plots: axes, up to two curves, a legend.

use std::fmt::Write as _;

use crate::spectrum::Spectrum;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 55.0;

/// Baseline drawn solid black; the optional second curve dashed red.
pub fn render_overlay(title: &str, baseline: &Spectrum<f64>, modified: Option<(&Spectrum<f64>, &str)>) -> String {
    let energies = baseline.energies();
    let (e_lo, e_hi) = (baseline.grid.e_min(), baseline.grid.e_max());
    let (t_lo, t_hi) = (0.0, 1.05);
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let x = |e: f64| LEFT + (e - e_lo) / (e_hi - e_lo) * plot_w;
    let y = |t: f64| TOP + (1.0 - (t.clamp(t_lo, t_hi) - t_lo) / (t_hi - t_lo)) * plot_h;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="22" text-anchor="middle" font-size="15">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );

    // axes box and ticks
    let _ = writeln!(
        s,
        r#"<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black" stroke-width="1"/>"#
    );
    for k in 0..=5 {
        let e = e_lo + (e_hi - e_lo) * k as f64 / 5.0;
        let px = x(e);
        let _ = writeln!(
            s,
            r#"<line x1="{px:.2}" y1="{:.2}" x2="{px:.2}" y2="{:.2}" stroke="black"/><text x="{px:.2}" y="{:.2}" text-anchor="middle">{e:.0}</text>"#,
            TOP + plot_h,
            TOP + plot_h + 5.0,
            TOP + plot_h + 20.0
        );
    }
    for k in 0..=5 {
        let t = k as f64 * 0.2;
        let py = y(t);
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{py:.2}" x2="{LEFT}" y2="{py:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{t:.1}</text>"#,
            LEFT - 5.0,
            LEFT - 8.0,
            py + 4.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">E (cm⁻¹, offset from {} cm⁻¹)</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 12.0,
        baseline.meta.reference_energy
    );
    let _ = writeln!(
        s,
        r#"<text x="18" y="{:.1}" text-anchor="middle" transform="rotate(-90 18 {:.1})">T = |t|²</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0
    );

    let polyline = |t: &[f64]| -> String {
        energies.iter().zip(t).map(|(&e, &v)| format!("{:.2},{:.2}", x(e), y(v))).collect::<Vec<_>>().join(" ")
    };
    let _ = writeln!(
        s,
        r#"<polyline fill="none" stroke="black" stroke-width="1.5" points="{}"/>"#,
        polyline(&baseline.transmission)
    );
    let mut legend = vec![("black", "", "baseline".to_string())];
    if let Some((m, label)) = modified {
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="red" stroke-width="1.5" stroke-dasharray="6,4" points="{}"/>"#,
            polyline(&m.transmission)
        );
        legend.push(("red", r#" stroke-dasharray="6,4""#, label.to_string()));
    }
    for (k, (color, dash, label)) in legend.iter().enumerate() {
        let ly = TOP + 18.0 + 18.0 * k as f64;
        let lx = WIDTH - RIGHT - 190.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{color}" stroke-width="1.5"{dash}/><text x="{:.1}" y="{:.1}">{}</text>"#,
            lx + 30.0,
            lx + 36.0,
            ly + 4.0,
            escape(label)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ProbeGrid;
    use crate::preset::{fmo_preset, PresetParams};
    use crate::scattering::Solver;
    use crate::spectrum::sweep_spectrum;

    #[test]
    fn overlay_has_two_curves_and_is_deterministic() {
        let (net, wg) = fmo_preset(&PresetParams::default()).unwrap();
        let s = sweep_spectrum(&net, &wg, &ProbeGrid::new(100.0, 800.0, 51).unwrap(), Solver::ClosedForm).unwrap();
        let a = render_overlay("J<1,2> & co", &s, Some((&s, "inhibit J1,2")));
        let b = render_overlay("J<1,2> & co", &s, Some((&s, "inhibit J1,2")));
        assert_eq!(a, b);
        assert_eq!(a.matches("<polyline").count(), 2);
        assert!(a.contains("stroke-dasharray"));
        assert!(a.contains("J&lt;1,2&gt; &amp; co"));
        assert!(a.trim_end().ends_with("</svg>"));
        let single = render_overlay("baseline", &s, None);
        assert_eq!(single.matches("<polyline").count(), 1);
    }
}
