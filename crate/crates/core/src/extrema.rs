//! Dip and peak detection by topographic prominence.

use std::cmp::Ordering;

use crate::scalar::Scalar;
use crate::spectrum::Spectrum;

pub const DEFAULT_PROMINENCE: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExtremumKind {
    Dip,
    Peak,
}

impl ExtremumKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ExtremumKind::Dip => "dip",
            ExtremumKind::Peak => "peak",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremum<T> {
    pub index: usize,
    pub energy: T,
    pub value: T,
    pub prominence: T,
    pub kind: ExtremumKind,
}

/// Interior local minima and maxima of the transmission curve whose
/// prominence is at least `prominence`, sorted by energy.
pub fn find_extrema<T: Scalar>(spec: &Spectrum<T>, prominence: T) -> Vec<Extremum<T>> {
    find_extrema_in(&spec.energies(), &spec.transmission, prominence)
}

pub fn count_dips<T: Scalar>(spec: &Spectrum<T>, prominence: T) -> usize {
    find_extrema(spec, prominence).iter().filter(|e| e.kind == ExtremumKind::Dip).count()
}

/// [`find_extrema`] over raw samples.
pub fn find_extrema_in<T: Scalar>(energies: &[T], values: &[T], prominence: T) -> Vec<Extremum<T>> {
    assert_eq!(energies.len(), values.len());
    let negated: Vec<T> = values.iter().map(|&v| -v).collect();
    let mut out: Vec<Extremum<T>> = local_maxima(values)
        .into_iter()
        .map(|i| (i, ExtremumKind::Peak, peak_prominence(values, i)))
        .chain(local_maxima(&negated).into_iter().map(|i| (i, ExtremumKind::Dip, peak_prominence(&negated, i))))
        .filter(|&(_, _, p)| p >= prominence)
        .map(|(index, kind, prominence)| Extremum {
            index,
            energy: energies[index],
            value: values[index],
            prominence,
            kind,
        })
        .collect();
    out.sort_by_key(|a| a.index);
    out
}

/// Strict interior maxima; a flat top counts once, at its middle sample.
fn local_maxima<T: Scalar>(x: &[T]) -> Vec<usize> {
    let mut out = Vec::new();
    let n = x.len();
    let mut i = 1;
    while i + 1 < n {
        if x[i - 1] < x[i] {
            let mut ahead = i + 1;
            while ahead + 1 < n && x[ahead] == x[i] {
                ahead += 1;
            }
            if x[ahead] < x[i] {
                out.push((i + ahead - 1) / 2);
                i = ahead;
            }
        }
        i += 1;
    }
    out
}

/// Height of a peak above the higher of the two minima separating it from
/// taller terrain (or the array ends) on either side.
fn peak_prominence<T: Scalar>(x: &[T], peak: usize) -> T {
    let h = x[peak];
    let lowest = |range: &mut dyn Iterator<Item = usize>| {
        let mut lo = h;
        for i in range {
            if x[i] > h {
                break;
            }
            lo = lo.min(x[i]);
        }
        lo
    };
    let left = lowest(&mut (0..peak).rev());
    let right = lowest(&mut (peak + 1..x.len()));
    h - match left.partial_cmp(&right) {
        Some(Ordering::Less) => right,
        _ => left,
    }
}
