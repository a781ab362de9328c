//! Gnuplot scripts for the trajectory files.

use std::fmt::Write as _;
use std::path::Path;

const PANELS: [(&str, usize); 6] = [("i1x", 2), ("i1y", 3), ("i1z", 4), ("i2x", 5), ("i2y", 6), ("i2z", 7)];

/// Script drawing every spin component of each CSV in `files`, one panel per
/// component.
pub fn gnuplot_script(files: &[&Path]) -> String {
    let mut s = String::new();
    s.push_str("set datafile separator ','\n");
    s.push_str("set key autotitle columnhead\n");
    s.push_str("set xlabel 't'\n");
    s.push_str("set multiplot layout 2,3\n");
    for (name, col) in PANELS {
        let _ = writeln!(s, "set title '{name}'");
        let plots: Vec<String> = files
            .iter()
            .map(|f| {
                let stem = f.file_stem().map(|x| x.to_string_lossy().into_owned()).unwrap_or_default();
                format!("'{}' using 1:{col} with lines title '{stem}'", f.display())
            })
            .collect();
        let _ = writeln!(s, "plot {}", plots.join(", \\\n     "));
    }
    s.push_str("unset multiplot\n");
    s
}
