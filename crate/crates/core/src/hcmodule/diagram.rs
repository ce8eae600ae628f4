//! K-type diagrams.
//!
//! A diagram shows the K-types `j ≡ k (mod 2)` in a window around the
//! generator: `●` for K-types in the support, `○` otherwise, `◎` for the
//! generator, `┆` for the axis marks at 0 and 1, and arrows for the
//! transitions.

use serde_json::{json, Value};

use super::{HcError, ModuleClass, SupportDirection, Transition};
use crate::half::HalfInteger;

/// Default number of K-type steps shown on each side of the generator.
pub const DEFAULT_WINDOW: usize = 4;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Arrow {
    pub at: HalfInteger,
    pub direction: Transition,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Diagram {
    pub caption: String,
    /// Every K-type drawn, in increasing order.
    pub nodes: Vec<HalfInteger>,
    /// The drawn K-types that lie in the support.
    pub support: Vec<HalfInteger>,
    pub generator: Option<HalfInteger>,
    pub transition: Option<Transition>,
    pub axis_marks: [i64; 2],
    pub arrows: Vec<Arrow>,
}

fn column(j: HalfInteger, lo: HalfInteger) -> usize {
    (2 * (j - lo).twice()) as usize
}

fn mark_column(mark: i64, lo: HalfInteger) -> usize {
    (2 * (HalfInteger::from_int(mark) - lo).twice()) as usize
}

/// Lays out the K-types of `m`: `window` steps of 2 on each side of the
/// generator, widened so that there is a K-type on each side of the marks.
pub fn ktype_diagram(m: &ModuleClass, window: usize) -> Result<Diagram, HcError> {
    if window < 4 {
        return Err(HcError::Window(window));
    }
    let support = m.support.ok_or_else(|| HcError::Weight(format!("module `{m}` has no K-type support to draw")))?;
    let center = m.generator.unwrap_or(support.boundary);
    let two = HalfInteger::from_int(2);
    let span = HalfInteger::from_int(2 * window as i64);
    let mut lo = center - span;
    let mut hi = center + span;
    while lo >= HalfInteger::ZERO {
        lo = lo - two;
    }
    while hi <= HalfInteger::ONE {
        hi = hi + two;
    }
    let mut nodes = Vec::new();
    let mut j = lo;
    while j <= hi {
        nodes.push(j);
        j = j + two;
    }
    let in_support: Vec<HalfInteger> = nodes.iter().copied().filter(|j| support.contains(*j)).collect();
    let mut arrows = Vec::new();
    let transition = m.generator.map(|_| Transition::Raise);
    if let (Some(g), Some(t)) = (m.generator, transition) {
        arrows.push(Arrow { at: g, direction: t });
        if support.direction == SupportDirection::Up && support.boundary < g {
            arrows.push(Arrow { at: support.boundary - two, direction: Transition::Lower });
        }
    }
    Ok(Diagram {
        caption: m.to_string(),
        nodes,
        support: in_support,
        generator: m.generator,
        transition,
        axis_marks: [0, 1],
        arrows,
    })
}

impl Diagram {
    /// The nearest drawn K-types below and above 0.
    pub fn labels_next_to_zero(&self) -> (HalfInteger, HalfInteger) {
        let below = *self.nodes.iter().filter(|j| **j < HalfInteger::ZERO).max().expect("window contains negative K-types");
        let above = *self.nodes.iter().filter(|j| **j > HalfInteger::ZERO).min().expect("window contains positive K-types");
        (below, above)
    }

    pub fn to_ascii(&self) -> String {
        let lo = self.nodes[0];
        let hi = *self.nodes.last().unwrap();
        let width = column(hi, lo) + 1;
        let mut top = vec![' '; width];
        let mut line = vec!['─'; width];
        let mut marks = vec![' '; width];
        for &mark in &self.axis_marks {
            let c = mark_column(mark, lo);
            line[c] = '┆';
            marks[c] = if mark == 0 { '0' } else { '1' };
        }
        for &j in &self.nodes {
            let c = column(j, lo);
            line[c] = if Some(j) == self.generator {
                '◎'
            } else if self.support.contains(&j) {
                '●'
            } else {
                '○'
            };
        }
        for a in &self.arrows {
            let c = column(a.at, lo);
            top[c] = match a.direction {
                Transition::Raise => '→',
                Transition::Lower => '←',
            };
        }
        if let Some(g) = self.generator {
            let label: Vec<char> = format!("k={g}").chars().collect();
            let c = column(g, lo);
            if c > label.len() {
                let start = c - label.len() - 1;
                top[start..start + label.len()].copy_from_slice(&label);
            } else {
                top.resize(top.len().max(c + 2 + label.len()), ' ');
                top[c + 2..c + 2 + label.len()].copy_from_slice(&label);
            }
        }
        let render = |row: Vec<char>| row.into_iter().collect::<String>().trim_end().to_string();
        format!("{}\n{}\n{}\n{}\n", self.caption, render(top), render(line), render(marks))
    }

    pub fn to_json(&self) -> Value {
        let direction = |t: Transition| match t {
            Transition::Raise => "raise",
            Transition::Lower => "lower",
        };
        json!({
            "caption": self.caption,
            "support": self.support.iter().map(|j| j.to_string()).collect::<Vec<_>>(),
            "generator": self.generator.map(|g| g.to_string()),
            "transition": self.transition.map(direction),
            "axis_marks": self.axis_marks,
            "window": [self.nodes[0].to_string(), self.nodes.last().unwrap().to_string()],
            "arrows": self
                .arrows
                .iter()
                .map(|a| json!({"at": a.at.to_string(), "direction": direction(a.direction)}))
                .collect::<Vec<_>>(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hcmodule::classify_form_module;

    fn h(twice: i64) -> HalfInteger {
        HalfInteger::from_twice(twice)
    }

    #[test]
    fn labels_near_zero_follow_the_residue() {
        for (twice, expect) in [(5, (h(-3), h(1))), (17, (h(-3), h(1))), (7, (h(-1), h(3))), (-1, (h(-1), h(3))), (-7, (h(-3), h(1)))] {
            let m = classify_form_module(h(twice), true).unwrap();
            let d = ktype_diagram(&m, DEFAULT_WINDOW).unwrap();
            assert_eq!(d.labels_next_to_zero(), expect, "k={}", h(twice));
        }
    }

    #[test]
    fn small_window_rejected() {
        let m = classify_form_module(h(3), false).unwrap();
        assert_eq!(ktype_diagram(&m, 3), Err(HcError::Window(3)));
    }

    #[test]
    fn intro_weight_three_halves() {
        let m = classify_form_module(h(3), false).unwrap();
        let d = ktype_diagram(&m, DEFAULT_WINDOW).unwrap();
        assert_eq!(d.generator, Some(h(3)));
        assert_eq!(d.support, d.nodes);
        let j = d.to_json();
        assert_eq!(j["generator"], "3/2");
        assert_eq!(j["transition"], "raise");
        assert_eq!(j["axis_marks"], json!([0, 1]));
    }
}
