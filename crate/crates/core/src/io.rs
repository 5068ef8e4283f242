//! CSV formats: tabulated profiles (`y,phi`) and curve polylines (`x,y`).

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::geometry::{CurvePolyline, DeckWord, Point, Profile, SurfaceSpec};

/// One data row of a profile table with its line number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileRow {
    pub row: usize,
    pub y: f64,
    pub phi: f64,
}

/// Reads the numeric rows of a `y,phi` table without checking them. Lines
/// starting with `#` are ignored; rows are numbered by file line.
pub fn read_profile_rows<R: std::io::Read>(reader: R) -> Result<Vec<ProfileRow>> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr.headers()?.clone();
    let cols: Vec<&str> = headers.iter().collect();
    if cols != ["y", "phi"] {
        let row = headers.position().map_or(1, |p| p.line() as usize);
        return Err(Error::Parse {
            row,
            msg: format!("expected header 'y,phi', got '{}'", cols.join(",")),
        });
    }
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::Parse {
            row: e.position().map_or(0, |p| p.line() as usize),
            msg: e.to_string(),
        })?;
        let row = rec.position().map_or(0, |p| p.line() as usize);
        if rec.len() != 2 {
            return Err(Error::Parse {
                row,
                msg: format!("expected 2 fields, got {}", rec.len()),
            });
        }
        let num = |i: usize, name: &str| -> Result<f64> {
            rec[i].parse::<f64>().map_err(|_| Error::Parse {
                row,
                msg: format!("{name} '{}' is not a number", &rec[i]),
            })
        };
        out.push(ProfileRow {
            row,
            y: num(0, "y")?,
            phi: num(1, "phi")?,
        });
    }
    if out.is_empty() {
        return Err(Error::Parse {
            row: 1,
            msg: "no data rows".into(),
        });
    }
    Ok(out)
}

/// Reads a `y,phi` table into a sampled profile on `[0, β]`, `β` being the
/// last ordinate. Values must be positive and ordinates increasing.
pub fn read_profile_csv<R: std::io::Read>(reader: R) -> Result<Profile> {
    let rows = read_profile_rows(reader)?;
    let mut last: Option<f64> = None;
    for r in &rows {
        if !(r.phi > 0.0) || !r.phi.is_finite() {
            return Err(Error::Parse {
                row: r.row,
                msg: format!("phi = {} is not positive", r.phi),
            });
        }
        if last.is_some_and(|l| !(r.y > l)) {
            return Err(Error::Parse {
                row: r.row,
                msg: format!("y = {} does not increase", r.y),
            });
        }
        last = Some(r.y);
    }
    let beta = rows[rows.len() - 1].y;
    Profile::sampled(
        beta,
        rows.iter().map(|r| r.y).collect(),
        rows.iter().map(|r| r.phi).collect(),
    )
}

pub fn read_profile_file(path: &std::path::Path) -> Result<Profile> {
    read_profile_csv(std::fs::File::open(path)?)
}

/// Writes `profile` tabulated on `n` uniform knots of `[0, β]`.
pub fn write_profile_csv<W: Write>(writer: W, profile: &Profile, n: usize) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["y", "phi"])?;
    let n = n.max(2);
    let beta = profile.beta();
    for i in 0..n {
        let y = if i + 1 == n { beta } else { beta * i as f64 / (n - 1) as f64 };
        w.write_record([y.to_string(), profile.eval(y).to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Writes a lifted polyline as `x,y` rows after comment lines carrying the
/// surface and deck word.
pub fn write_curve_csv<W: Write>(mut writer: W, surface: &SurfaceSpec, curve: &CurvePolyline) -> Result<()> {
    let word = curve.word();
    writeln!(writer, "# surface={} beta={}", surface.kind, surface.beta)?;
    writeln!(writer, "# word k={} m={}", word.k, word.m)?;
    writeln!(writer, "x,y")?;
    for p in curve.vertices() {
        writeln!(writer, "{},{}", p.x, p.y)?;
    }
    Ok(())
}

/// Reads a file written by [`write_curve_csv`] back into a polyline.
pub fn read_curve_csv<R: BufRead>(reader: R, surface: &SurfaceSpec) -> Result<CurvePolyline> {
    let mut word = None;
    let mut vertices = Vec::new();
    let mut header_seen = false;
    for (i, line) in reader.lines().enumerate() {
        let row = i + 1;
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(rest) = comment.trim().strip_prefix("word") {
                word = Some(parse_word(rest, row)?);
            }
            continue;
        }
        if !header_seen {
            if line != "x,y" {
                return Err(Error::Parse {
                    row,
                    msg: format!("expected header 'x,y', got '{line}'"),
                });
            }
            header_seen = true;
            continue;
        }
        let mut parts = line.split(',');
        let mut next = |name: &str| -> Result<f64> {
            parts
                .next()
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| Error::Parse {
                    row,
                    msg: format!("missing or invalid {name}"),
                })
        };
        let x = next("x")?;
        let y = next("y")?;
        vertices.push(Point::new(x, y));
    }
    let word = word.ok_or_else(|| Error::Parse {
        row: 1,
        msg: "missing '# word k=.. m=..' line".into(),
    })?;
    CurvePolyline::new(surface, vertices, word)
}

fn parse_word(s: &str, row: usize) -> Result<DeckWord> {
    let mut k = None;
    let mut m = None;
    for tok in s.split_whitespace() {
        if let Some(v) = tok.strip_prefix("k=") {
            k = v.parse().ok();
        } else if let Some(v) = tok.strip_prefix("m=") {
            m = v.parse().ok();
        }
    }
    match (k, m) {
        (Some(k), Some(m)) => Ok(DeckWord::new(k, m)),
        _ => Err(Error::Parse {
            row,
            msg: format!("cannot read deck word from '{}'", s.trim()),
        }),
    }
}

/// Writes unit vectors as `X,Y,Z` rows.
pub fn write_sphere_csv<W: Write>(mut writer: W, points: &[[f64; 3]]) -> Result<()> {
    writeln!(writer, "X,Y,Z")?;
    for p in points {
        writeln!(writer, "{},{},{}", p[0], p[1], p[2])?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn profile_round_trip() {
        let p = Profile::phi0(1.0).unwrap();
        let mut buf = Vec::new();
        write_profile_csv(&mut buf, &p, 33).unwrap();
        let q = read_profile_csv(buf.as_slice()).unwrap();
        assert_eq!(q.beta(), 1.0);
        assert_eq!(q.eval(0.5), p.eval(0.5));
    }

    #[test]
    fn profile_errors_carry_rows() {
        let bad = "y,phi\n0,1\n0.5,abc\n1,1\n";
        match read_profile_csv(bad.as_bytes()) {
            Err(Error::Parse { row, .. }) => assert_eq!(row, 3),
            other => panic!("{other:?}"),
        }
        let neg = "# comment\ny,phi\n0,1\n0.5,-1\n1,1\n";
        match read_profile_csv(neg.as_bytes()) {
            Err(Error::Parse { row, msg }) => {
                assert_eq!(row, 4);
                assert!(msg.contains("not positive"));
            }
            other => panic!("{other:?}"),
        }
        assert!(read_profile_csv("a,b\n0,1\n".as_bytes()).is_err());
        assert!(read_profile_csv("y,phi\n0,1\n0,1\n".as_bytes()).is_err());
    }

    #[test]
    fn curve_round_trip() {
        let s = SurfaceSpec::klein(0.5).unwrap();
        let c = CurvePolyline::new(
            &s,
            vec![Point::new(0.0, 0.1), Point::new(1.0, 0.4), Point::new(PI, -0.1)],
            DeckWord::new(1, 0),
        )
        .unwrap();
        let mut buf = Vec::new();
        write_curve_csv(&mut buf, &s, &c).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.contains("# word k=1 m=0"));
        let back = read_curve_csv(buf.as_slice(), &s).unwrap();
        assert_eq!(back, c);
    }
}
