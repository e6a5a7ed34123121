//! TSPLIB text formats: EUC_2D instances with a NODE_COORD_SECTION, and
//! tour files with a TOUR_SECTION terminated by -1. Parsing is tolerant of
//! keyword order and extra whitespace; vertex ids are renumbered 1..n in
//! file order.

use crate::error::{Error, Result};
use crate::instance::{EuclideanInstance, Point, Vertex, DEFAULT_MATRIX_THRESHOLD};
use crate::tour::Tour;

pub fn parse_instance(text: &str) -> Result<EuclideanInstance> {
    parse_instance_with_threshold(text, DEFAULT_MATRIX_THRESHOLD)
}

pub fn parse_instance_with_threshold(
    text: &str,
    matrix_threshold: usize,
) -> Result<EuclideanInstance> {
    let mut name = String::from("unnamed");
    let mut dimension: Option<usize> = None;
    let mut coords: Vec<Point> = Vec::new();
    let mut saw_type = false;
    let mut saw_weight_type = false;
    let mut in_coords = false;

    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let lineno = idx + 1;
        if in_coords {
            if line.eq_ignore_ascii_case("EOF") {
                in_coords = false;
                continue;
            }
            // A keyword line ends the section early (dimension check below
            // reports the shortfall).
            if line.contains(':') && line.split(':').next().unwrap().trim().chars().all(|c| {
                c.is_ascii_alphabetic() || c == '_'
            }) {
                in_coords = false;
            } else {
                let mut f = line.split_whitespace();
                let _id = f
                    .next()
                    .ok_or_else(|| malformed(lineno, "empty coordinate line"))?;
                let x: f64 = parse_coord(f.next(), lineno)?;
                let y: f64 = parse_coord(f.next(), lineno)?;
                coords.push((x, y));
                continue;
            }
        }
        let (key, value) = split_keyword(line);
        match key.to_ascii_uppercase().as_str() {
            "NAME" => name = value.to_string(),
            "COMMENT" => {}
            "TYPE" => {
                if !value.eq_ignore_ascii_case("TSP") {
                    return Err(Error::UnsupportedType(value.to_string()));
                }
                saw_type = true;
            }
            "DIMENSION" => {
                dimension = Some(
                    value
                        .parse()
                        .map_err(|_| malformed(lineno, "DIMENSION is not an integer"))?,
                );
            }
            "EDGE_WEIGHT_TYPE" => {
                if !value.eq_ignore_ascii_case("EUC_2D") {
                    return Err(Error::UnsupportedEdgeWeightType(value.to_string()));
                }
                saw_weight_type = true;
            }
            "NODE_COORD_SECTION" => in_coords = true,
            "EOF" => break,
            other => return Err(malformed(lineno, &format!("unknown keyword {other:?}"))),
        }
    }

    if !saw_type {
        return Err(malformed(0, "missing TYPE: TSP"));
    }
    if !saw_weight_type {
        return Err(malformed(0, "missing EDGE_WEIGHT_TYPE: EUC_2D"));
    }
    let declared = dimension.ok_or_else(|| malformed(0, "missing DIMENSION"))?;
    if coords.len() != declared {
        return Err(Error::DimensionMismatch {
            declared,
            found: coords.len(),
        });
    }
    EuclideanInstance::with_matrix_threshold(name, coords, matrix_threshold)
}

fn split_keyword(line: &str) -> (&str, &str) {
    match line.split_once(':') {
        Some((k, v)) => (k.trim(), v.trim()),
        None => match line.split_once(char::is_whitespace) {
            Some((k, v)) => (k.trim(), v.trim()),
            None => (line, ""),
        },
    }
}

fn parse_coord(field: Option<&str>, lineno: usize) -> Result<f64> {
    field
        .ok_or_else(|| malformed(lineno, "coordinate line needs id, x, y"))?
        .parse()
        .map_err(|_| malformed(lineno, "unparseable coordinate"))
}

fn malformed(line: usize, reason: &str) -> Error {
    Error::MalformedHeader {
        line,
        reason: reason.to_string(),
    }
}

pub fn write_instance(instance: &EuclideanInstance) -> String {
    let mut out = String::new();
    out.push_str(&format!("NAME : {}\n", instance.name()));
    out.push_str("TYPE : TSP\n");
    out.push_str(&format!("DIMENSION : {}\n", instance.dimension()));
    out.push_str("EDGE_WEIGHT_TYPE : EUC_2D\n");
    out.push_str("NODE_COORD_SECTION\n");
    for (i, (x, y)) in instance.coords().iter().enumerate() {
        out.push_str(&format!("{} {} {}\n", i + 1, x, y));
    }
    out.push_str("EOF\n");
    out
}

pub fn write_tour(tour: &Tour, name: &str) -> String {
    let mut out = String::new();
    out.push_str(&format!("NAME : {name}\n"));
    out.push_str("TYPE : TOUR\n");
    out.push_str(&format!("DIMENSION : {}\n", tour.dimension()));
    out.push_str("TOUR_SECTION\n");
    for &v in tour.order() {
        out.push_str(&format!("{}\n", v + 1));
    }
    out.push_str("-1\nEOF\n");
    out
}

/// Parses a tour file into a 0-based vertex order. Repeated or
/// out-of-range vertices are rejected; validation against a concrete
/// instance happens when the order is priced into a `Tour`.
pub fn parse_tour(text: &str) -> Result<Vec<Vertex>> {
    let mut dimension: Option<usize> = None;
    let mut order: Vec<Vertex> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let mut in_section = false;

    for raw in text.lines() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if !in_section {
            if line.eq_ignore_ascii_case("TOUR_SECTION") {
                in_section = true;
            } else if let ("DIMENSION", v) = {
                let (k, v) = split_keyword(line);
                (k.to_ascii_uppercase().as_str(), v)
            } {
                dimension = v.parse().ok();
            }
            continue;
        }
        for token in line.split_whitespace() {
            if token == "-1" || token.eq_ignore_ascii_case("EOF") {
                in_section = false;
                break;
            }
            let id: i64 = token
                .parse()
                .map_err(|_| Error::InvalidTour(format!("unparseable vertex {token:?}")))?;
            if id < 1 {
                return Err(Error::InvalidTour(format!("vertex {id} out of range")));
            }
            if let Some(n) = dimension {
                if id as usize > n {
                    return Err(Error::InvalidTour(format!(
                        "vertex {id} out of range 1..={n}"
                    )));
                }
            }
            if !seen.insert(id) {
                return Err(Error::InvalidTour(format!("vertex {id} repeated")));
            }
            order.push((id - 1) as Vertex);
        }
    }

    if order.is_empty() {
        return Err(Error::InvalidTour("no TOUR_SECTION entries".into()));
    }
    Ok(order)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "NAME : tiny\nTYPE : TSP\nDIMENSION : 3\nEDGE_WEIGHT_TYPE : EUC_2D\nNODE_COORD_SECTION\n1 0 0\n2 3 0\n3 0 4\nEOF\n";

    #[test]
    fn parses_minimal_instance() {
        let inst = parse_instance(MINIMAL).unwrap();
        assert_eq!(inst.name(), "tiny");
        assert_eq!(inst.dimension(), 3);
        assert_eq!(inst.coords(), &[(0.0, 0.0), (3.0, 0.0), (0.0, 4.0)]);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let text = MINIMAL.replace("DIMENSION : 3", "DIMENSION : 5");
        assert!(matches!(
            parse_instance(&text),
            Err(Error::DimensionMismatch {
                declared: 5,
                found: 3
            })
        ));
    }

    #[test]
    fn explicit_weights_rejected() {
        let text = MINIMAL.replace("EUC_2D", "EXPLICIT");
        assert!(matches!(
            parse_instance(&text),
            Err(Error::UnsupportedEdgeWeightType(t)) if t == "EXPLICIT"
        ));
    }

    #[test]
    fn tour_type_rejected() {
        let text = MINIMAL.replace("TYPE : TSP", "TYPE : TOUR");
        assert!(matches!(parse_instance(&text), Err(Error::UnsupportedType(_))));
    }

    #[test]
    fn keyword_order_and_whitespace_tolerated() {
        let text = "TYPE: TSP\nEDGE_WEIGHT_TYPE:EUC_2D\n  DIMENSION :  3\nNAME : x\nNODE_COORD_SECTION\n  1   0   0\n2 3 0\n3 0 4\n";
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.dimension(), 3);
    }

    #[test]
    fn instance_round_trip() {
        let inst = parse_instance(MINIMAL).unwrap();
        let again = parse_instance(&write_instance(&inst)).unwrap();
        assert_eq!(again.name(), inst.name());
        assert_eq!(again.coords(), inst.coords());
    }

    #[test]
    fn tour_format_and_round_trip() {
        let inst = parse_instance(MINIMAL).unwrap();
        let t = Tour::from_order(vec![0, 1, 2], &inst).unwrap();
        let text = write_tour(&t, "tiny");
        assert!(text.contains("TOUR_SECTION\n1\n2\n3\n-1\n"));
        assert_eq!(parse_tour(&text).unwrap(), vec![0, 1, 2]);
    }

    #[test]
    fn tour_rejects_zero_and_repeats() {
        assert!(matches!(
            parse_tour("TOUR_SECTION\n0\n-1\n"),
            Err(Error::InvalidTour(_))
        ));
        assert!(matches!(
            parse_tour("TOUR_SECTION\n1\n2\n2\n-1\n"),
            Err(Error::InvalidTour(_))
        ));
        assert!(matches!(
            parse_tour("DIMENSION : 3\nTOUR_SECTION\n1\n2\n4\n-1\n"),
            Err(Error::InvalidTour(_))
        ));
    }

    #[test]
    fn random_permutation_round_trips() {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(50);
        let coords: Vec<_> = (0..50).map(|i| (i as f64 * 2.0, (i % 7) as f64)).collect();
        let inst = EuclideanInstance::new("fifty", coords).unwrap();
        let mut order: Vec<Vertex> = (0..50).collect();
        order.shuffle(&mut rng);
        let t = Tour::from_order(order.clone(), &inst).unwrap();
        assert_eq!(parse_tour(&write_tour(&t, "fifty")).unwrap(), order);
    }
}
