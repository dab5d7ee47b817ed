use crate::Check;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Lines,
}

/// Checks sorted by name. `Lines` gives one `CHECK <name> PASS|FAIL <detail>` record each.
pub fn render(checks: &[Check], format: Format) -> String {
    let mut sorted: Vec<&Check> = checks.iter().collect();
    sorted.sort_by(|a, b| a.name.cmp(&b.name));
    let mut out = String::new();
    match format {
        Format::Lines => {
            for c in sorted {
                out.push_str(&format!("CHECK {} {} {}\n", c.name, c.verdict(), c.detail).trim_end().to_string());
                out.push('\n');
            }
        }
        Format::Text => {
            let width = sorted.iter().map(|c| c.name.len()).max().unwrap_or(0);
            for c in &sorted {
                out.push_str(&format!("{}  {:width$}  {}\n", c.verdict(), c.name, c.detail));
            }
            let failed = sorted.iter().filter(|c| !c.passed).count();
            out.push_str(&format!("{} passed, {} failed\n", sorted.len() - failed, failed));
        }
    }
    out
}
