use std::fmt::Write;

/// One tagger's row.
#[derive(Clone, Debug, PartialEq)]
pub struct ReportRow {
    pub tagger: String,
    /// Against gold tags.
    pub accuracy: f64,
    /// Against the HMM's Viterbi output.
    pub agreement_with_hmm: f64,
    pub words_per_sec: f64,
    /// `None` for the HMM itself.
    pub size: Option<(usize, usize)>,
    pub build_secs: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct EvalReport {
    pub rows: Vec<ReportRow>,
}

impl EvalReport {
    pub fn row(&self, tagger: &str) -> Option<&ReportRow> {
        self.rows.iter().find(|r| r.tagger == tagger)
    }

    /// Aligned table, one row per tagger.
    pub fn table(&self) -> String {
        let header = ["tagger", "accuracy %", "agree %", "words/sec", "states", "arcs", "build s"];
        let mut cells: Vec<[String; 7]> = vec![header.map(String::from)];
        for r in &self.rows {
            let (states, arcs) = match r.size {
                Some((s, a)) => (s.to_string(), a.to_string()),
                None => ("-".into(), "-".into()),
            };
            cells.push([
                r.tagger.clone(),
                format!("{:.2}", 100.0 * r.accuracy),
                format!("{:.2}", 100.0 * r.agreement_with_hmm),
                format!("{:.0}", r.words_per_sec),
                states,
                arcs,
                format!("{:.3}", r.build_secs),
            ]);
        }
        let widths: Vec<usize> = (0..7).map(|i| cells.iter().map(|row| row[i].len()).max().unwrap_or(0)).collect();
        let mut out = String::new();
        for row in &cells {
            let mut line = format!("{:<w$}", row[0], w = widths[0]);
            for i in 1..7 {
                write!(line, "  {:>w$}", row[i], w = widths[i]).unwrap();
            }
            out.push_str(line.trim_end());
            out.push('\n');
        }
        out
    }

    /// `metric<TAB>tagger<TAB>value` lines.
    pub fn lines(&self) -> String {
        let mut out = String::new();
        for r in &self.rows {
            let t = &r.tagger;
            writeln!(out, "accuracy\t{t}\t{:.6}", r.accuracy).unwrap();
            writeln!(out, "agreement_with_hmm\t{t}\t{:.6}", r.agreement_with_hmm).unwrap();
            writeln!(out, "words_per_sec\t{t}\t{:.1}", r.words_per_sec).unwrap();
            if let Some((s, a)) = r.size {
                writeln!(out, "states\t{t}\t{s}").unwrap();
                writeln!(out, "arcs\t{t}\t{a}").unwrap();
            }
            writeln!(out, "build_time\t{t}\t{:.6}", r.build_secs).unwrap();
        }
        out
    }
}
