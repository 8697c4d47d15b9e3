//! The MIAS annotation index: one whitespace-separated record per line,
//! `reference tissue class [severity x y radius]`.

use std::collections::HashMap;

use mammotex_core::{RoiSpec, Severity};

use crate::error::{CliError, Result};

pub const DEFAULT_IMAGE_HEIGHT: u32 = 1024;

/// Parses the index, converting the bottom-left y origin to top-left with
/// `y_top = image_height - 1 - y`. Records without coordinates are skipped,
/// as are blank lines and lines starting with `#`. When a reference carries
/// several abnormalities, the second and later ones get ids `ref-2`, `ref-3`.
pub fn parse_mias_index(text: &str, image_height: u32) -> Result<Vec<RoiSpec>> {
    let mut out = Vec::new();
    let mut seen: HashMap<String, usize> = HashMap::new();
    for (n, line) in text.lines().enumerate() {
        let line_no = n + 1;
        let err = |reason: String| CliError::MiasIndex {
            line: line_no,
            reason,
        };
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() < 5 || fields[4].starts_with('*') {
            continue;
        }
        if fields.len() < 7 {
            return Err(err(format!("expected 7 fields, found {}", fields.len())));
        }
        let label = match fields[3] {
            "B" => Severity::Benign,
            "M" => Severity::Malignant,
            other => return Err(err(format!("unknown severity {other:?}"))),
        };
        let number = |i: usize, name: &str| -> Result<i64> {
            fields[i]
                .parse::<i64>()
                .map_err(|_| err(format!("malformed {name} {:?}", fields[i])))
        };
        let x = number(4, "x")?;
        let y = number(5, "y")?;
        let radius = number(6, "radius")?;
        if radius < 1 || radius > i64::from(u32::MAX) {
            return Err(err(format!("radius {radius} must be positive")));
        }
        let reference = fields[0].to_string();
        let count = seen.entry(reference.clone()).or_insert(0);
        *count += 1;
        let id = if *count == 1 {
            reference.clone()
        } else {
            format!("{reference}-{count}")
        };
        out.push(RoiSpec {
            id,
            image: reference,
            center_x: x,
            center_y: i64::from(image_height) - 1 - y,
            radius: radius as u32,
            label,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_record() {
        let rois = parse_mias_index("mdb001 G CIRC B 535 425 197", 1024).unwrap();
        let r = &rois[0];
        assert_eq!(
            (r.id.as_str(), r.center_x, r.center_y, r.radius, r.label),
            ("mdb001", 535, 598, 197, Severity::Benign)
        );
    }

    #[test]
    fn skips_normals_and_comments() {
        let text = "# header\n\nmdb003 D NORM\nmdb005 F CIRC B 477 133 30\nmdb005 F CIRC B 500 168 26\nmdb023 G CIRC M 538 681 29\n";
        let rois = parse_mias_index(text, 1024).unwrap();
        let ids: Vec<&str> = rois.iter().map(|r| r.id.as_str()).collect();
        assert_eq!(ids, ["mdb005", "mdb005-2", "mdb023"]);
        assert_eq!(rois[1].image, "mdb005");
        assert_eq!(rois[2].label, Severity::Malignant);
    }

    #[test]
    fn rejects_bad_records() {
        assert!(parse_mias_index("mdb000 G CIRC X 1 2 3", 1024)
            .unwrap_err()
            .to_string()
            .contains("severity"));
        assert!(parse_mias_index("mdb000 G CIRC B 1 two 3", 1024).is_err());
        assert!(parse_mias_index("mdb000 G CIRC B 1 2 0", 1024).is_err());
        assert!(parse_mias_index("mdb000 G CIRC B 1 2", 1024).is_err());
    }
}
