use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::tables::CORRELATION_ORDER;
use super::HarnessError;
use crate::stats::RankCorrelationMatrix;

const CELL: usize = 64;
const MARGIN: usize = 48;

const COLD: [f64; 3] = [33.0, 102.0, 172.0];
const NEUTRAL: [f64; 3] = [255.0, 255.0, 255.0];
const HOT: [f64; 3] = [103.0, 0.0, 31.0];

/// Fixed diverging ramp: -1 blue, 0 white, 1 dark red.
fn color(value: f64) -> String {
    let v = value.clamp(-1.0, 1.0);
    let (from, to, t) = if v < 0.0 {
        (NEUTRAL, COLD, -v)
    } else {
        (NEUTRAL, HOT, v)
    };
    let channel = |i: usize| (from[i] + (to[i] - from[i]) * t).round() as u8;
    format!("#{:02x}{:02x}{:02x}", channel(0), channel(1), channel(2))
}

fn text_color(value: f64) -> &'static str {
    if value.abs() > 0.55 {
        "#ffffff"
    } else {
        "#000000"
    }
}

/// Standalone SVG of the full 8x8 matrix with two-decimal cell labels.
pub fn render_heatmap(matrix: &RankCorrelationMatrix) -> Result<String, HarnessError> {
    let k = CORRELATION_ORDER.len();
    let mut values = vec![0.0; k * k];
    for (i, &a) in CORRELATION_ORDER.iter().enumerate() {
        for (j, &b) in CORRELATION_ORDER.iter().enumerate() {
            values[i * k + j] =
                matrix
                    .mean(a, b)
                    .ok_or_else(|| HarnessError::IncompleteMatrix {
                        a: a.label().to_string(),
                        b: b.label().to_string(),
                    })?;
        }
    }

    let size = MARGIN + k * CELL;
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r##"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}" font-family="sans-serif" font-size="14">"##
    );
    let _ = writeln!(
        svg,
        r##"<rect width="{size}" height="{size}" fill="#ffffff"/>"##
    );
    for (i, m) in CORRELATION_ORDER.iter().enumerate() {
        let center = MARGIN + i * CELL + CELL / 2;
        let _ = writeln!(
            svg,
            r##"<text x="{center}" y="{}" text-anchor="middle">{}</text>"##,
            MARGIN - 14,
            m.label()
        );
        let _ = writeln!(
            svg,
            r##"<text x="{}" y="{center}" text-anchor="end" dominant-baseline="middle">{}</text>"##,
            MARGIN - 8,
            m.label()
        );
    }
    for i in 0..k {
        for j in 0..k {
            let v = values[i * k + j];
            let (x, y) = (MARGIN + j * CELL, MARGIN + i * CELL);
            let _ = writeln!(
                svg,
                r##"<rect class="cell" x="{x}" y="{y}" width="{CELL}" height="{CELL}" fill="{}" stroke="#ffffff"/>"##,
                color(v)
            );
            let _ = writeln!(
                svg,
                r##"<text x="{}" y="{}" text-anchor="middle" dominant-baseline="middle" fill="{}">{v:.2}</text>"##,
                x + CELL / 2,
                y + CELL / 2,
                text_color(v)
            );
        }
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

pub fn emit_heatmap(matrix: &RankCorrelationMatrix, path: &Path) -> Result<(), HarnessError> {
    let svg = render_heatmap(matrix)?;
    fs::write(path, svg).map_err(|e| HarnessError::io(path, e))
}
