use super::HarnessError;

pub const SWEEP_CSV_HEADER: &str =
    "ebn0_db,frames,bit_errors,frame_errors,decoding_failures,fer,ber,dfr,seconds";
pub const NSWEEP_CSV_HEADER: &str =
    "list_bits,ebn0_db,frames,bit_errors,frame_errors,decoding_failures,fer,ber,dfr,seconds";

/// Counters for one SNR point.
#[derive(Debug, Clone, PartialEq)]
pub struct PointStats {
    pub ebn0_db: f64,
    pub frames: u64,
    pub bit_errors: u64,
    pub frame_errors: u64,
    pub decoding_failures: u64,
    pub fer: f64,
    pub ber: f64,
    pub dfr: f64,
    pub seconds: f64,
}

impl PointStats {
    pub fn new(
        ebn0_db: f64,
        frames: u64,
        bit_errors: u64,
        frame_errors: u64,
        decoding_failures: u64,
        n: usize,
        seconds: f64,
    ) -> Self {
        let f = frames.max(1) as f64;
        Self {
            ebn0_db,
            frames,
            bit_errors,
            frame_errors,
            decoding_failures,
            fer: frame_errors as f64 / f,
            ber: bit_errors as f64 / (f * n as f64),
            dfr: decoding_failures as f64 / f,
            seconds,
        }
    }

    fn csv_fields(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            fmt_f64(self.ebn0_db),
            self.frames,
            self.bit_errors,
            self.frame_errors,
            self.decoding_failures,
            fmt_f64(self.fer),
            fmt_f64(self.ber),
            fmt_f64(self.dfr),
            fmt_f64(self.seconds)
        )
    }

    fn from_fields(line: usize, fields: &[&str]) -> Result<Self, HarnessError> {
        let err = |msg: String| HarnessError::Csv { line, msg };
        let float = |i: usize| {
            fields[i]
                .parse::<f64>()
                .map_err(|_| err(format!("bad number {:?}", fields[i])))
        };
        let int = |i: usize| {
            fields[i]
                .parse::<u64>()
                .map_err(|_| err(format!("bad count {:?}", fields[i])))
        };
        Ok(Self {
            ebn0_db: float(0)?,
            frames: int(1)?,
            bit_errors: int(2)?,
            frame_errors: int(3)?,
            decoding_failures: int(4)?,
            fer: float(5)?,
            ber: float(6)?,
            dfr: float(7)?,
            seconds: float(8)?,
        })
    }
}

/// Results of a sweep, one entry per grid point.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepStats {
    pub points: Vec<PointStats>,
}

/// 17 significant digits, enough for an exact `f64` round trip.
fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn render_sweep_csv(stats: &SweepStats) -> String {
    let mut out = String::from(SWEEP_CSV_HEADER);
    out.push('\n');
    for p in &stats.points {
        out += &p.csv_fields();
        out.push('\n');
    }
    out
}

fn data_lines<'a>(
    text: &'a str,
    header: &str,
) -> Result<impl Iterator<Item = (usize, Vec<&'a str>)>, HarnessError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim_end() == header => {}
        _ => {
            return Err(HarnessError::Csv {
                line: 1,
                msg: format!("expected header {header:?}"),
            })
        }
    }
    Ok(lines
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| (i + 1, l.trim_end().split(',').collect())))
}

pub fn parse_sweep_csv(text: &str) -> Result<SweepStats, HarnessError> {
    let points = data_lines(text, SWEEP_CSV_HEADER)?
        .map(|(line, fields)| {
            if fields.len() != 9 {
                return Err(HarnessError::Csv {
                    line,
                    msg: format!("expected 9 fields, found {}", fields.len()),
                });
            }
            PointStats::from_fields(line, &fields)
        })
        .collect::<Result<_, _>>()?;
    Ok(SweepStats { points })
}

pub fn render_nsweep_csv(runs: &[(usize, SweepStats)]) -> String {
    let mut out = String::from(NSWEEP_CSV_HEADER);
    out.push('\n');
    for (nb, stats) in runs {
        for p in &stats.points {
            out += &format!("{nb},{}\n", p.csv_fields());
        }
    }
    out
}

pub fn parse_nsweep_csv(text: &str) -> Result<Vec<(usize, SweepStats)>, HarnessError> {
    let mut runs: Vec<(usize, SweepStats)> = Vec::new();
    for (line, fields) in data_lines(text, NSWEEP_CSV_HEADER)? {
        if fields.len() != 10 {
            return Err(HarnessError::Csv {
                line,
                msg: format!("expected 10 fields, found {}", fields.len()),
            });
        }
        let nb = fields[0].parse::<usize>().map_err(|_| HarnessError::Csv {
            line,
            msg: format!("bad list size {:?}", fields[0]),
        })?;
        let p = PointStats::from_fields(line, &fields[1..])?;
        match runs.last_mut() {
            Some((last, s)) if *last == nb => s.points.push(p),
            _ => runs.push((nb, SweepStats { points: vec![p] })),
        }
    }
    Ok(runs)
}

/// Eb/N0 at which the FER curve crosses `target`, interpolating linearly in
/// `log10(FER)` between the first pair of adjacent points that bracket it.
pub fn snr_for_target_fer(stats: &SweepStats, target: f64) -> Option<f64> {
    stats.points.windows(2).find_map(|w| {
        let (a, b) = (&w[0], &w[1]);
        if a.fer >= target && b.fer <= target && a.fer > 0.0 {
            if b.fer == 0.0 {
                return Some(b.ebn0_db);
            }
            let (la, lb, lt) = (a.fer.log10(), b.fer.log10(), target.log10());
            if la == lb {
                return Some(a.ebn0_db);
            }
            Some(a.ebn0_db + (lt - la) / (lb - la) * (b.ebn0_db - a.ebn0_db))
        } else {
            None
        }
    })
}
