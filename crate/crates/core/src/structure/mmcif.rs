//! Minimal mmCIF reader covering the atom_site, exptl and refine categories.

use super::{assemble, element_from_name, RawAtom, Structure, StructureError};
use crate::geometry::Vec3;
use std::collections::HashMap;

pub(crate) fn parse(content: &str, fallback_id: &str) -> Result<Structure, StructureError> {
    let tokens = tokenize(content);
    let mut entry_id = fallback_id.to_string();
    let mut methods: Vec<String> = Vec::new();
    let mut resolution: Option<f64> = None;
    let mut em_resolution: Option<f64> = None;
    let mut atoms: Vec<RawAtom> = Vec::new();

    let mut i = 0;
    while i < tokens.len() {
        let tok = &tokens[i];
        if tok.text == "loop_" {
            // Collect the tag list, then rows of len(tags) values.
            let mut tags: Vec<String> = Vec::new();
            i += 1;
            while i < tokens.len() && tokens[i].text.starts_with('_') {
                tags.push(tokens[i].text.to_ascii_lowercase());
                i += 1;
            }
            let mut rows: Vec<Vec<&Token>> = Vec::new();
            while i < tokens.len() && !is_structural(&tokens[i].text) {
                let mut row = Vec::with_capacity(tags.len());
                for _ in 0..tags.len() {
                    if i >= tokens.len() || is_structural(&tokens[i].text) {
                        break;
                    }
                    row.push(&tokens[i]);
                    i += 1;
                }
                if row.len() == tags.len() {
                    rows.push(row);
                } else {
                    break;
                }
            }
            if tags.iter().any(|t| t.starts_with("_atom_site.")) {
                parse_atom_site_loop(&tags, &rows, &mut atoms)?;
            } else if tags.iter().any(|t| t == "_exptl.method") {
                let col = tags.iter().position(|t| t == "_exptl.method").unwrap();
                for row in &rows {
                    if let Some(v) = value(row[col]) {
                        methods.push(v.to_ascii_uppercase());
                    }
                }
            }
        } else if tok.text.starts_with('_') {
            let tag = tok.text.to_ascii_lowercase();
            let val = tokens.get(i + 1).and_then(value);
            match tag.as_str() {
                "_entry.id" => {
                    if let Some(v) = val {
                        entry_id = v;
                    }
                }
                "_exptl.method" => {
                    if let Some(v) = val {
                        methods.push(v.to_ascii_uppercase());
                    }
                }
                "_refine.ls_d_res_high" => {
                    resolution = val.and_then(|v| v.parse().ok());
                }
                "_em_3d_reconstruction.resolution" => {
                    em_resolution = val.and_then(|v| v.parse().ok());
                }
                _ => {}
            }
            i += 1;
        }
        i += 1;
    }

    let method = if methods.is_empty() { None } else { Some(methods.join("; ")) };
    assemble(atoms, entry_id, method, resolution.or(em_resolution))
}

fn parse_atom_site_loop(
    tags: &[String],
    rows: &[Vec<&Token>],
    atoms: &mut Vec<RawAtom>,
) -> Result<(), StructureError> {
    let col: HashMap<&str, usize> = tags
        .iter()
        .enumerate()
        .map(|(idx, t)| (t.strip_prefix("_atom_site.").unwrap_or(t).trim(), idx))
        .collect();
    let get = |row: &[&Token], name: &str| -> Option<String> {
        col.get(name).and_then(|&idx| value(row[idx]))
    };
    let require = |row: &[&Token], name: &str, line: usize| -> Result<String, StructureError> {
        get(row, name).ok_or_else(|| StructureError::UnparsableRecord {
            line,
            reason: format!("missing atom_site.{name}"),
        })
    };

    for row in rows {
        let line = row[0].line;
        if let Some(model) = get(row, "pdbx_pdb_model_num") {
            if model.parse::<u32>().unwrap_or(1) != 1 {
                continue;
            }
        }
        let parse_f = |name: &str| -> Result<f64, StructureError> {
            require(row, name, line)?.parse::<f64>().map_err(|_| {
                StructureError::UnparsableRecord {
                    line,
                    reason: format!("bad atom_site.{name}"),
                }
            })
        };
        let x = parse_f("cartn_x")?;
        let y = parse_f("cartn_y")?;
        let z = parse_f("cartn_z")?;
        let occupancy = match get(row, "occupancy") {
            Some(v) => v.parse::<f64>().map_err(|_| StructureError::UnparsableRecord {
                line,
                reason: "bad atom_site.occupancy".into(),
            })?,
            None => 1.0,
        };
        let residue_name =
            get(row, "auth_comp_id").or_else(|| get(row, "label_comp_id")).unwrap_or_default();
        let atom_name =
            get(row, "auth_atom_id").or_else(|| get(row, "label_atom_id")).unwrap_or_default();
        let chain_id = get(row, "auth_asym_id")
            .or_else(|| get(row, "label_asym_id"))
            .unwrap_or_else(|| "A".into());
        let seq_field =
            get(row, "auth_seq_id").or_else(|| get(row, "label_seq_id")).unwrap_or_default();
        let seq_number =
            seq_field.parse::<i32>().map_err(|_| StructureError::UnparsableRecord {
                line,
                reason: format!("bad atom_site seq id {seq_field:?}"),
            })?;
        let element = match get(row, "type_symbol") {
            Some(e) => e.to_ascii_uppercase(),
            None => element_from_name(&atom_name, &residue_name),
        };
        atoms.push(RawAtom {
            line,
            chain_id,
            seq_number,
            insertion_code: get(row, "pdbx_pdb_ins_code").and_then(|s| s.chars().next()),
            residue_name,
            atom_name,
            alt_loc: get(row, "label_alt_id").and_then(|s| s.chars().next()),
            element,
            position: Vec3::new(x, y, z),
            occupancy,
        });
    }
    Ok(())
}

struct Token {
    text: String,
    line: usize,
}

fn is_structural(text: &str) -> bool {
    text == "loop_" || text.starts_with('_') || text.starts_with("data_")
}

/// Value of a data token; `.` and `?` are CIF nulls.
fn value(tok: &Token) -> Option<String> {
    match tok.text.as_str() {
        "." | "?" => None,
        t => Some(t.to_string()),
    }
}

/// Split CIF text into tokens: whitespace-separated words, quoted strings and
/// semicolon-delimited text blocks.
fn tokenize(content: &str) -> Vec<Token> {
    let mut tokens = Vec::new();
    let mut lines = content.lines().enumerate().peekable();
    while let Some((lineno, line)) = lines.next() {
        let lineno = lineno + 1;
        if let Some(rest) = line.strip_prefix(';') {
            // Multi-line text block: runs until a line starting with ';'.
            let mut text = rest.to_string();
            for (_, l) in lines.by_ref() {
                if l.starts_with(';') {
                    break;
                }
                if !text.is_empty() {
                    text.push('\n');
                }
                text.push_str(l);
            }
            tokens.push(Token { text, line: lineno });
            continue;
        }
        let mut chars = line.char_indices().peekable();
        while let Some((start, c)) = chars.next() {
            if c.is_whitespace() {
                continue;
            }
            if c == '#' {
                break;
            }
            if c == '\'' || c == '"' {
                let quote = c;
                let mut text = String::new();
                let mut closed = false;
                while let Some((_, ch)) = chars.next() {
                    if ch == quote {
                        // Closing quote must be followed by whitespace or EOL.
                        match chars.peek() {
                            Some((_, nxt)) if !nxt.is_whitespace() => text.push(ch),
                            _ => {
                                closed = true;
                                break;
                            }
                        }
                    } else {
                        text.push(ch);
                    }
                }
                let _ = closed;
                tokens.push(Token { text, line: lineno });
            } else {
                let mut end = line.len();
                while let Some(&(idx, ch)) = chars.peek() {
                    if ch.is_whitespace() {
                        end = idx;
                        break;
                    }
                    chars.next();
                }
                if end == line.len() {
                    tokens.push(Token { text: line[start..].to_string(), line: lineno });
                } else {
                    tokens.push(Token { text: line[start..end].to_string(), line: lineno });
                }
            }
        }
    }
    tokens
}
