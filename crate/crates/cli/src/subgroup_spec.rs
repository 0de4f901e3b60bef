//! Parsing of `--subgroup` arguments: `kernel:D=..`, `torsion:m=..`,
//! `gen:a,b,..`, and any of these prefixed by `pm:`.

use congnorm::normalizer::{sigma_kernel_closed_form, sigma_pm_kernel, sigma_torsion_closed_form};
use congnorm::subgroups::{subgroup_generated, subgroup_kernel, subgroup_torsion, ResidueSubgroup};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubgroupSpec {
    Kernel(u64),
    Torsion(u64),
    Generated(Vec<u64>),
    Pm(Box<SubgroupSpec>),
}

impl std::str::FromStr for SubgroupSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("pm:") {
            return Ok(SubgroupSpec::Pm(Box::new(rest.parse()?)));
        }
        let (kind, arg) = s
            .split_once(':')
            .ok_or_else(|| format!("expected kind:argument, got `{s}`"))?;
        let num = |v: &str| -> Result<u64, String> {
            v.trim()
                .parse()
                .map_err(|_| format!("`{v}` is not a nonnegative integer"))
        };
        let keyed = |key: &str| -> Result<u64, String> {
            let v = arg
                .strip_prefix(key)
                .and_then(|r| r.strip_prefix('='))
                .ok_or_else(|| format!("expected {kind}:{key}=<integer>"))?;
            num(v)
        };
        match kind {
            "kernel" => Ok(SubgroupSpec::Kernel(keyed("D")?)),
            "torsion" => Ok(SubgroupSpec::Torsion(keyed("m")?)),
            "gen" => Ok(SubgroupSpec::Generated(
                arg.split(',').map(num).collect::<Result<_, _>>()?,
            )),
            _ => Err(format!("unknown subgroup kind `{kind}`")),
        }
    }
}

impl std::fmt::Display for SubgroupSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SubgroupSpec::Kernel(d) => write!(f, "kernel:D={d}"),
            SubgroupSpec::Torsion(m) => write!(f, "torsion:m={m}"),
            SubgroupSpec::Generated(g) => {
                let g: Vec<String> = g.iter().map(u64::to_string).collect();
                write!(f, "gen:{}", g.join(","))
            }
            SubgroupSpec::Pm(inner) => write!(f, "pm:{inner}"),
        }
    }
}

impl SubgroupSpec {
    pub fn build(&self, n: u64) -> congnorm::Result<ResidueSubgroup> {
        match self {
            SubgroupSpec::Kernel(d) => subgroup_kernel(n, *d),
            SubgroupSpec::Torsion(m) => subgroup_torsion(n, *m),
            SubgroupSpec::Generated(g) => subgroup_generated(n, g),
            SubgroupSpec::Pm(inner) => Ok(inner.build(n)?.pm_extend()),
        }
    }

    /// The closed-form σ, for the families that have one.
    pub fn closed_form_sigma(&self, n: u64) -> congnorm::Result<Option<u64>> {
        match self {
            SubgroupSpec::Kernel(d) => sigma_kernel_closed_form(n, *d).map(Some),
            SubgroupSpec::Torsion(m) => sigma_torsion_closed_form(n, *m).map(Some),
            SubgroupSpec::Pm(inner) => match inner.as_ref() {
                SubgroupSpec::Kernel(d) => sigma_pm_kernel(n, *d).map(Some),
                _ => Ok(None),
            },
            SubgroupSpec::Generated(_) => Ok(None),
        }
    }
}
