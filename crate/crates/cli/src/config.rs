//! Plain-text `key = value` configuration with `[sections]`.

use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use ini::Ini;
use lagvac::elasticity::StressLaw;
use lagvac::thermo::TableSpec;
use lagvac::{GasLaw, SymState};

/// Parsed configuration file; every lookup falls back to a default.
#[derive(Debug, Default)]
pub struct RunConfig {
    ini: Ini,
    base: PathBuf,
    /// Raw bytes of the file, hashed into reports.
    pub raw: Vec<u8>,
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let raw = std::fs::read(path).with_context(|| format!("reading config {}", path.display()))?;
        let text = String::from_utf8(raw.clone()).context("config is not UTF-8")?;
        Self::parse(&text, path.parent().unwrap_or(Path::new(".")), raw)
    }

    pub fn parse(text: &str, base: &Path, raw: Vec<u8>) -> Result<Self> {
        let ini = Ini::load_from_str(text).map_err(|e| anyhow!("config: {e}"))?;
        Ok(Self {
            ini,
            base: base.to_path_buf(),
            raw,
        })
    }

    pub fn get(&self, section: &str, key: &str) -> Option<&str> {
        self.ini.section(Some(section)).and_then(|s| s.get(key)).map(str::trim)
    }

    pub fn f64_or(&self, section: &str, key: &str, default: f64) -> Result<f64> {
        match self.get(section, key) {
            None => Ok(default),
            Some(s) => parse_f64(s).with_context(|| format!("[{section}] {key}")),
        }
    }

    pub fn opt_f64(&self, section: &str, key: &str) -> Result<Option<f64>> {
        self.get(section, key)
            .map(|s| parse_f64(s).with_context(|| format!("[{section}] {key}")))
            .transpose()
    }

    pub fn pair_or(&self, section: &str, key: &str, default: [f64; 2]) -> Result<[f64; 2]> {
        let Some(s) = self.get(section, key) else {
            return Ok(default);
        };
        let v = parse_list(s).with_context(|| format!("[{section}] {key}"))?;
        match v[..] {
            [a, b] => Ok([a, b]),
            _ => bail!("[{section}] {key}: expected two comma-separated numbers"),
        }
    }

    pub fn path(&self, section: &str, key: &str) -> Option<PathBuf> {
        self.get(section, key).map(|p| self.base.join(p))
    }

    pub fn state(&self, section: &str, side: &str, default: (f64, f64)) -> Result<SymState> {
        let h = self.f64_or(section, &format!("h_{side}"), default.0)?;
        let u = self.f64_or(section, &format!("u_{side}"), default.1)?;
        Ok(SymState::new(h, u)?)
    }

    /// `[law]`: `kind = gamma` with `beta` or `gamma` (and `a` for the raw
    /// scale), or `kind = table` with a `v,p` CSV `file`.
    pub fn gas_law(&self) -> Result<GasLaw> {
        let kind = self.get("law", "kind").unwrap_or("gamma");
        let law = match kind {
            "gamma" => {
                let gamma = self.opt_f64("law", "gamma")?;
                let beta = self.opt_f64("law", "beta")?;
                match (self.get("law", "scale").unwrap_or("rescaled"), gamma, beta) {
                    ("rescaled", Some(g), None) => GasLaw::gamma(g)?,
                    ("rescaled", None, b) => GasLaw::with_beta(b.unwrap_or(2.0))?,
                    ("raw", Some(g), None) => GasLaw::gamma_raw(g, self.f64_or("law", "a", 1.0)?)?,
                    ("raw", None, _) => bail!("[law] scale = raw needs gamma"),
                    (_, Some(_), Some(_)) => bail!("[law] give either gamma or beta, not both"),
                    (s, ..) => bail!("[law] unknown scale {s:?}"),
                }
            }
            "table" => {
                let path = self.path("law", "file").ok_or_else(|| anyhow!("[law] kind = table needs file"))?;
                let text = std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
                GasLaw::table(TableSpec {
                    samples: read_pairs(&text)?,
                    tail_exponent: self.opt_f64("law", "tail_exponent")?,
                })?
            }
            k => bail!("[law] unknown kind {k:?}"),
        };
        Ok(law)
    }

    /// `[elastic]`: `family = power` (`tau_inf`, `m`), `linear` (`slope`,
    /// `u0`) or `table` (`u,tau` CSV `file`).
    pub fn stress_law(&self) -> Result<StressLaw> {
        let s = "elastic";
        Ok(match self.get(s, "family").unwrap_or("power") {
            "power" => StressLaw::power(self.f64_or(s, "tau_inf", 1.0)?, self.f64_or(s, "m", 2.0)?)?,
            "linear" => StressLaw::linear(self.f64_or(s, "slope", 0.5)?, self.f64_or(s, "u0", 1.0)?)?,
            "table" => {
                let path = self.path(s, "file").ok_or_else(|| anyhow!("[elastic] family = table needs file"))?;
                let text = std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
                StressLaw::from_csv(&text)?
            }
            f => bail!("[elastic] unknown family {f:?}"),
        })
    }
}

fn parse_f64(s: &str) -> Result<f64> {
    s.trim().parse::<f64>().map_err(|_| anyhow!("not a number: {s:?}"))
}

fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',').map(parse_f64).collect()
}

/// Two-column numeric CSV, header optional.
fn read_pairs(text: &str) -> Result<Vec<(f64, f64)>> {
    let mut rows = Vec::new();
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        if rec.len() != 2 {
            bail!("table row {}: expected two columns", i + 1);
        }
        match (rec[0].parse::<f64>(), rec[1].parse::<f64>()) {
            (Ok(a), Ok(b)) => rows.push((a, b)),
            _ if i == 0 => continue,
            _ => bail!("table row {}: not numeric", i + 1),
        }
    }
    Ok(rows)
}

/// Sample times: `a,b,c` or `start:step:end` (inclusive).
pub fn parse_times(s: &str) -> Result<Vec<f64>> {
    if s.contains(':') {
        let parts: Vec<f64> = s.split(':').map(parse_f64).collect::<Result<_>>()?;
        let [start, step, end] = parts[..] else {
            bail!("time range must be start:step:end");
        };
        if !(step > 0.0) || !(end >= start) {
            bail!("time range needs step > 0 and end >= start");
        }
        let n = ((end - start) / step * (1.0 + 1e-12)).floor() as usize;
        Ok((0..=n).map(|k| start + k as f64 * step).collect())
    } else {
        parse_list(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn times_syntax() {
        assert_eq!(parse_times("0.1,0.2").unwrap(), vec![0.1, 0.2]);
        assert_eq!(parse_times("0:0.25:1").unwrap(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert!(parse_times("0:1").is_err());
        assert!(parse_times("1:-1:2").is_err());
    }

    #[test]
    fn sections_and_defaults() {
        let c = RunConfig::parse("[law]\nbeta = 3\n[riemann]\nh_l = 2\ndomain = -3, 4\n", Path::new("."), vec![]).unwrap();
        assert_eq!(c.gas_law().unwrap().beta(), Some(3.0));
        assert_eq!(c.state("riemann", "l", (1.0, 0.0)).unwrap().h, 2.0);
        assert_eq!(c.pair_or("riemann", "domain", [0.0, 1.0]).unwrap(), [-3.0, 4.0]);
        assert!(RunConfig::parse("[law]\nbeta = x\n", Path::new("."), vec![]).unwrap().gas_law().is_err());
    }
}
