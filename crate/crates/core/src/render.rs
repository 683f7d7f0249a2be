//! Deterministic text and SVG renderings of the figure grids.
//!
//! Every figure is a list of panels; a panel is a sparse grid of labelled
//! cells plus arrows between cells. Cell order and label text are canonical,
//! so renderings are byte-stable for fixed inputs and diff cleanly.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Figure {
    pub title: String,
    pub panels: Vec<Panel>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Panel {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub cells: Vec<Cell>,
    pub arrows: Vec<Arrow>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Cell {
    pub x: i64,
    pub y: i64,
    pub lines: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Arrow {
    pub from: (i64, i64),
    pub to: (i64, i64),
    pub label: String,
}

impl Panel {
    pub fn new(title: &str, x_label: &str, y_label: &str) -> Self {
        Panel {
            title: title.to_string(),
            x_label: x_label.to_string(),
            y_label: y_label.to_string(),
            cells: Vec::new(),
            arrows: Vec::new(),
        }
    }

    pub fn push_cell(&mut self, x: i64, y: i64, lines: Vec<String>) {
        self.cells.push(Cell { x, y, lines });
    }

    fn normalized(&self) -> Panel {
        let mut p = self.clone();
        p.cells.sort_by_key(|c| (std::cmp::Reverse(c.y), c.x));
        p.arrows.sort_by_key(|a| (a.from, a.to));
        p
    }
}

/// Fixed-width text rendering: one row of the grid per y value (descending),
/// columns aligned, multi-line cells stacked, arrows listed after the grid.
pub fn render_text(fig: &Figure) -> String {
    let mut out = String::new();
    out.push_str(&format!("# {}\n", fig.title));
    for panel in &fig.panels {
        let p = panel.normalized();
        out.push_str(&format!("\n## {}   [x = {}, y = {}]\n", p.title, p.x_label, p.y_label));
        if p.cells.is_empty() {
            out.push_str("(empty)\n");
            continue;
        }
        let xs: Vec<i64> = {
            let mut v: Vec<i64> = p.cells.iter().map(|c| c.x).collect();
            v.sort_unstable();
            v.dedup();
            v
        };
        let ys: Vec<i64> = {
            let mut v: Vec<i64> = p.cells.iter().map(|c| c.y).collect();
            v.sort_unstable();
            v.dedup();
            v.reverse();
            v
        };
        // column widths from content
        let mut width = vec![0usize; xs.len()];
        for c in &p.cells {
            let col = xs.iter().position(|&x| x == c.x).unwrap();
            for line in &c.lines {
                width[col] = width[col].max(line.chars().count());
            }
        }
        let ylab_w = ys
            .iter()
            .map(|y| y.to_string().chars().count())
            .max()
            .unwrap_or(1)
            .max(2);
        // header
        out.push_str(&format!("{:>ylab_w$} |", ""));
        for (col, x) in xs.iter().enumerate() {
            out.push_str(&format!(" {:^w$} |", x, w = width[col].max(3)));
        }
        out.push('\n');
        for y in &ys {
            let row_cells: Vec<Option<&Cell>> = xs
                .iter()
                .map(|&x| p.cells.iter().find(|c| c.x == x && c.y == *y))
                .collect();
            let height = row_cells
                .iter()
                .map(|c| c.map_or(1, |c| c.lines.len().max(1)))
                .max()
                .unwrap_or(1);
            for line_idx in 0..height {
                if line_idx == 0 {
                    out.push_str(&format!("{:>ylab_w$} |", y));
                } else {
                    out.push_str(&format!("{:>ylab_w$} |", ""));
                }
                for (col, cell) in row_cells.iter().enumerate() {
                    let text = cell
                        .and_then(|c| c.lines.get(line_idx))
                        .map(|s| s.as_str())
                        .unwrap_or("");
                    out.push_str(&format!(" {:<w$} |", text, w = width[col].max(3)));
                }
                out.push('\n');
            }
        }
        if !p.arrows.is_empty() {
            out.push_str("arrows:\n");
            for a in &p.arrows {
                out.push_str(&format!(
                    "  ({}, {}) -> ({}, {})  {}\n",
                    a.from.0, a.from.1, a.to.0, a.to.1, a.label
                ));
            }
        }
    }
    out
}

/// SVG rendering generated from the same data as the text form.
pub fn render_svg(fig: &Figure) -> String {
    const CELL_W: i64 = 220;
    const CELL_H: i64 = 64;
    const PAD: i64 = 40;
    let mut out = String::new();
    let mut panels_svg = String::new();
    let mut y_cursor: i64 = PAD;
    let mut max_w: i64 = 0;
    for panel in &fig.panels {
        let p = panel.normalized();
        if p.cells.is_empty() {
            continue;
        }
        let xs: Vec<i64> = {
            let mut v: Vec<i64> = p.cells.iter().map(|c| c.x).collect();
            v.sort_unstable();
            v.dedup();
            v
        };
        let ys: Vec<i64> = {
            let mut v: Vec<i64> = p.cells.iter().map(|c| c.y).collect();
            v.sort_unstable();
            v.dedup();
            v.reverse();
            v
        };
        let col = |x: i64| xs.iter().position(|&v| v == x).unwrap() as i64;
        let row = |y: i64| ys.iter().position(|&v| v == y).unwrap() as i64;
        let ox = PAD;
        let oy = y_cursor + 24;
        panels_svg.push_str(&format!(
            "<text x=\"{ox}\" y=\"{}\" font-size=\"15\" font-weight=\"bold\">{} [x = {}, y = {}]</text>\n",
            y_cursor + 8,
            xml_escape(&p.title),
            xml_escape(&p.x_label),
            xml_escape(&p.y_label)
        ));
        for c in &p.cells {
            let cx = ox + col(c.x) * CELL_W;
            let cy = oy + row(c.y) * CELL_H;
            panels_svg.push_str(&format!(
                "<rect x=\"{cx}\" y=\"{cy}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n",
                CELL_W - 6,
                CELL_H - 6
            ));
            panels_svg.push_str(&format!(
                "<text x=\"{}\" y=\"{}\" font-size=\"10\">({}, {})</text>\n",
                cx + 4,
                cy + 12,
                c.x, c.y
            ));
            for (i, line) in c.lines.iter().enumerate() {
                panels_svg.push_str(&format!(
                    "<text x=\"{}\" y=\"{}\" font-size=\"11\">{}</text>\n",
                    cx + 4,
                    cy + 26 + 12 * i as i64,
                    xml_escape(line)
                ));
            }
        }
        for a in &p.arrows {
            let x1 = ox + col(a.from.0) * CELL_W + CELL_W - 6;
            let y1 = oy + row(a.from.1) * CELL_H + CELL_H / 2;
            let x2 = ox + col(a.to.0) * CELL_W;
            let y2 = oy + row(a.to.1) * CELL_H + CELL_H / 2;
            panels_svg.push_str(&format!(
                "<line x1=\"{x1}\" y1=\"{y1}\" x2=\"{x2}\" y2=\"{y2}\" stroke=\"black\" marker-end=\"url(#tip)\"/>\n"
            ));
        }
        let panel_w = ox + xs.len() as i64 * CELL_W + PAD;
        let panel_h = ys.len() as i64 * CELL_H + 40;
        max_w = max_w.max(panel_w);
        y_cursor = oy + panel_h;
    }
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\">\n",
        max_w.max(200),
        y_cursor + PAD
    ));
    out.push_str("<defs><marker id=\"tip\" markerWidth=\"8\" markerHeight=\"8\" refX=\"6\" refY=\"3\" orient=\"auto\"><path d=\"M0,0 L6,3 L0,6 z\"/></marker></defs>\n");
    out.push_str(&format!(
        "<text x=\"{PAD}\" y=\"24\" font-size=\"17\" font-weight=\"bold\">{}</text>\n",
        xml_escape(&fig.title)
    ));
    out.push_str(&panels_svg);
    out.push_str("</svg>\n");
    out
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

// ---------------------------------------------------------------------------
// Figure builders
// ---------------------------------------------------------------------------

use crate::groth::VirtualRep;
use crate::segment::CuspidalDatum;
use crate::sheaf;
use crate::spectral::{self, LocalCase, SsPage, TableFunctor};
use crate::twist::WeightTwist;
use crate::Result;
use crate::VirtualSheaf;
use std::collections::BTreeMap;

fn rep_lines(v: &VirtualRep) -> Vec<String> {
    v.terms()
        .map(|((w, t), c)| {
            if *t == WeightTwist::zero() {
                format!("{c}·[{}]", w.runs_text())
            } else {
                format!("{c}·[{}]⊗{t}", w.runs_text())
            }
        })
        .collect()
}

fn sheaf_lines(v: &VirtualSheaf) -> Vec<String> {
    v.terms()
        .map(|(sym, c)| format!("{c}·{} t={} [{}]⊗{}", sym.kind, sym.t, sym.word.runs_text(), sym.twist))
        .collect()
}

fn rep_page_panel(title: &str, page: &SsPage<VirtualRep>) -> Panel {
    let mut panel = Panel::new(title, "i", "j");
    for (&(i, j), cell) in &page.cells {
        panel.push_cell(i, j, rep_lines(cell));
    }
    for d in &page.differentials {
        panel.arrows.push(Arrow {
            from: d.from,
            to: d.to,
            label: format!("kills [{}]⊗{}", d.shared.0.runs_text(), d.shared.1),
        });
    }
    panel
}

/// Monodromy-graded marking grid: on the line `k` the strata `t` carrying a
/// graded piece, with its twist.
pub fn fig_mgr(s: u32) -> Figure {
    let mut panel = Panel::new("graded pieces", "t", "k");
    for k in (1 - s as i64)..(s as i64) {
        for (t, twist) in sheaf::mgr(s, k) {
            panel.push_cell(t as i64, k, vec![format!("x ⊗ {twist}")]);
        }
    }
    Figure {
        title: format!("monodromy graded pieces, s = {s}"),
        panels: vec![panel],
    }
}

/// The local pages: page one with its differentials, and the limit page.
pub fn fig_mle(base: &CuspidalDatum, s: u32) -> Result<Figure> {
    let p1 = spectral::mle_page(base, s, 1)?;
    let p2 = spectral::mle_page(base, s, 2)?;
    Ok(Figure {
        title: format!("local monodromy pages, s = {s}"),
        panels: vec![
            rep_page_panel("page 1", &p1),
            rep_page_panel("limit page", &p2),
        ],
    })
}

/// Global vanishing-cycle spectral sequence: starting page with arrows, and
/// the abutment panel.
pub fn fig_global(base: &CuspidalDatum, d: u32, g: u32, case: LocalCase) -> Result<Figure> {
    let gss = spectral::global_ss(base, d, g, case)?;
    let mut page_panel = Panel::new("E2 page", "p", "q");
    for (&(p, q), cell) in &gss.page.cells {
        page_panel.push_cell(p, q, rep_lines(cell));
    }
    for diff in &gss.page.differentials {
        page_panel.arrows.push(Arrow {
            from: diff.from,
            to: diff.to,
            label: format!("kills [{}]⊗{}", diff.shared.0.runs_text(), diff.shared.1),
        });
    }
    let mut abut_panel = Panel::new("abutment", "degree", "");
    for (&deg, cell) in &gss.abutment {
        abut_panel.push_cell(deg, 0, rep_lines(cell));
    }
    let tag = crate::export::case_tag(case);
    Ok(Figure {
        title: format!("vanishing-cycle spectral sequence, {tag}, s = {}, g = {g}", d / g),
        panels: vec![page_panel, abut_panel],
    })
}

/// Assembled global monodromy page in `(degree, k)` coordinates, with the
/// degenerate page below.
pub fn fig_mge(base: &CuspidalDatum, d: u32, g: u32) -> Result<Figure> {
    let build = |r: u32| -> Result<Panel> {
        let page = spectral::mge_page(base, d, g, r)?;
        let title = if r == 1 { "page 1" } else { "limit page" };
        let mut panel = Panel::new(title, "degree", "k");
        let mut grouped: BTreeMap<(i64, i64), VirtualSheaf> = BTreeMap::new();
        for (&(i, j), cell) in &page.cells {
            grouped
                .entry((i + j, -i))
                .or_insert_with(VirtualSheaf::zero)
                .add(cell);
        }
        for ((m, k), cell) in grouped {
            panel.push_cell(m, k, sheaf_lines(&cell));
        }
        Ok(panel)
    };
    Ok(Figure {
        title: format!("assembled monodromy pages, d = {d}, g = {g}"),
        panels: vec![build(1)?, build(2)?],
    })
}

/// The `(i, k)` table of cohomology of the graded pieces against a Speh
/// component, with the abutment panel below.
pub fn fig_gr_cohomology(base: &CuspidalDatum, s: u32, g: u32) -> Result<Figure> {
    let d = s * g;
    let mut grid: BTreeMap<(i64, i64), VirtualRep> = BTreeMap::new();
    for k in (1 - s as i64)..(s as i64) {
        for (t, _) in sheaf::mgr(s, k) {
            let table = spectral::cohomology_table(base, LocalCase::Speh, t, s, TableFunctor::JShriekStar)?;
            let twist = WeightTwist::rec_half(-((t * g) as i64 - 1 + k));
            for (&i, entry) in &table {
                grid.entry((i, k))
                    .or_insert_with(VirtualRep::zero)
                    .add(&entry.twisted(&twist)?);
            }
        }
    }
    let mut panel = Panel::new("graded cohomology", "i", "k");
    for ((i, k), cell) in grid {
        panel.push_cell(i, k, rep_lines(&cell));
    }
    let gss = spectral::global_ss(base, d, g, LocalCase::Speh)?;
    let mut abut = Panel::new("abutment", "degree", "");
    for (&deg, cell) in &gss.abutment {
        abut.push_cell(deg, 0, rep_lines(cell));
    }
    Ok(Figure {
        title: format!("graded cohomology table, s = {s}, g = {g}"),
        panels: vec![panel, abut],
    })
}

/// Build a figure by name; `s`, `g`, `d` are consumed as each figure needs.
pub fn build_figure(
    name: &str,
    s: Option<u32>,
    g: Option<u32>,
    d: Option<u32>,
) -> Result<Figure> {
    use crate::error::CalcError;
    let need = |p: Option<u32>, what: &str| {
        p.ok_or_else(|| CalcError::Usage(format!("figure {name} needs --{what}")))
    };
    match name {
        "fig1" => Ok(fig_mgr(need(s, "s")?)),
        "fig4" | "fig5" => {
            let s = need(s, "s")?;
            let g = need(g, "g")?;
            let base = CuspidalDatum::self_dual(g, "pi");
            let case = if name == "fig4" { LocalCase::Sp } else { LocalCase::Speh };
            fig_global(&base, s * g, g, case)
        }
        "fig6" => {
            let s = need(s, "s")?;
            fig_mle(&CuspidalDatum::self_dual(1, "pi"), s)
        }
        "fig9" => {
            let g = need(g, "g")?;
            let d = need(d, "d")?;
            fig_mge(&CuspidalDatum::self_dual(g, "pi"), d, g)
        }
        "fig10" => {
            let s = need(s, "s")?;
            let g = need(g, "g")?;
            fig_gr_cohomology(&CuspidalDatum::self_dual(g, "pi"), s, g)
        }
        other => Err(CalcError::Usage(format!("unknown figure {other:?}"))),
    }
}
