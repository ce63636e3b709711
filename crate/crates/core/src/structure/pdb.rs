//! Fixed-column PDB reader and writer.

use super::{assemble, element_from_name, RawAtom, Structure, StructureError};

pub(crate) fn parse(content: &str, fallback_id: &str) -> Result<Structure, StructureError> {
    let mut atoms: Vec<RawAtom> = Vec::new();
    let mut entry_id = fallback_id.to_string();
    let mut method: Option<String> = None;
    let mut resolution: Option<f64> = None;
    let mut model: u32 = 1;
    let mut seen_model_record = false;

    for (lineno, line) in content.lines().enumerate() {
        let lineno = lineno + 1;
        let record = field(line, 0, 6);
        match record.as_str() {
            "ATOM" | "HETATM" => {
                if model != 1 {
                    continue;
                }
                atoms.push(parse_atom_line(line, lineno)?);
            }
            "MODEL" => {
                model = field(line, 10, 14).parse().unwrap_or(1);
                seen_model_record = true;
            }
            "ENDMDL" => {
                if seen_model_record {
                    // Only model 1 is read.
                    break;
                }
            }
            "HEADER" => {
                let id = field(line, 62, 66);
                if id.len() == 4 {
                    entry_id = id;
                }
            }
            "EXPDTA" => {
                let text = field(line, 10, 79).to_ascii_uppercase();
                if !text.is_empty() {
                    match &mut method {
                        Some(m) => {
                            m.push(' ');
                            m.push_str(&text);
                        }
                        None => method = Some(text),
                    }
                }
            }
            "REMARK" if field(line, 7, 10) == "2" && line.contains("RESOLUTION.") => {
                resolution = parse_remark2_resolution(line);
            }
            _ => {}
        }
    }

    assemble(atoms, entry_id, method, resolution)
}

fn parse_atom_line(line: &str, lineno: usize) -> Result<RawAtom, StructureError> {
    let coord = |start: usize, end: usize, what: &str| -> Result<f64, StructureError> {
        field(line, start, end).parse::<f64>().map_err(|_| StructureError::UnparsableRecord {
            line: lineno,
            reason: format!("bad {what} field {:?}", field(line, start, end)),
        })
    };
    let x = coord(30, 38, "x")?;
    let y = coord(38, 46, "y")?;
    let z = coord(46, 54, "z")?;
    let occupancy = {
        let f = field(line, 54, 60);
        if f.is_empty() {
            1.0
        } else {
            f.parse::<f64>().map_err(|_| StructureError::UnparsableRecord {
                line: lineno,
                reason: format!("bad occupancy field {f:?}"),
            })?
        }
    };
    let seq_number =
        field(line, 22, 26).parse::<i32>().map_err(|_| StructureError::UnparsableRecord {
            line: lineno,
            reason: format!("bad residue number {:?}", field(line, 22, 26)),
        })?;
    let residue_name = field(line, 17, 20);
    let atom_name = field(line, 12, 16);
    let element = {
        let e = field(line, 76, 78).to_ascii_uppercase();
        if e.is_empty() {
            element_from_name(&atom_name, &residue_name)
        } else {
            e
        }
    };
    let alt_loc = line.chars().nth(16).filter(|c| !c.is_whitespace());
    let insertion_code = line.chars().nth(26).filter(|c| !c.is_whitespace());
    let chain_id = {
        let c = field(line, 21, 22);
        if c.is_empty() {
            "A".to_string()
        } else {
            c
        }
    };
    Ok(RawAtom {
        line: lineno,
        chain_id,
        seq_number,
        insertion_code,
        residue_name,
        atom_name,
        alt_loc,
        element,
        position: crate::geometry::Vec3::new(x, y, z),
        occupancy,
    })
}

/// Trimmed substring of a fixed-column line; out-of-range is empty.
fn field(line: &str, start: usize, end: usize) -> String {
    line.get(start..end.min(line.len())).unwrap_or("").trim().to_string()
}

fn parse_remark2_resolution(line: &str) -> Option<f64> {
    let after = line.split("RESOLUTION.").nth(1)?;
    after.split_whitespace().find_map(|tok| tok.parse::<f64>().ok())
}

/// Serialize a structure back to PDB text. Only records the parser reads are
/// emitted, so parse -> write -> parse is the identity.
pub fn write_pdb(structure: &Structure) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "HEADER    {:<40}{:>9}   {:>4}",
        "PROTEIN", "01-JAN-00", structure.entry_id
    );
    if let Some(method) = &structure.method {
        let _ = writeln!(out, "EXPDTA    {method}");
    }
    if let Some(res) = structure.resolution {
        let _ = writeln!(out, "REMARK   2 RESOLUTION. {res:7.2} ANGSTROMS.");
    }
    let mut serial: usize = 0;
    for chain in &structure.chains {
        for residue in &chain.residues {
            for atom in &residue.atoms {
                serial += 1;
                let name = if atom.name.len() >= 4 {
                    atom.name.clone()
                } else {
                    format!(" {:<3}", atom.name)
                };
                let _ = writeln!(
                    out,
                    "ATOM  {:>5} {:<4} {:<3} {}{:>4}{}   {:8.3}{:8.3}{:8.3}{:6.2}{:6.2}          {:>2}",
                    serial % 100000,
                    name,
                    residue.aa.three_letter(),
                    chain.id.chars().next().unwrap_or('A'),
                    residue.seq_number,
                    residue.insertion_code.unwrap_or(' '),
                    atom.position.x,
                    atom.position.y,
                    atom.position.z,
                    atom.occupancy,
                    0.0,
                    atom.element,
                );
            }
        }
        serial += 1;
        let _ = writeln!(out, "TER   {:>5}", serial % 100000);
    }
    out.push_str("END\n");
    out
}
