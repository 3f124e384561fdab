//! Availability traces as `t,node,state` CSV for replay.

use std::io::{Read, Write};

use crate::BenchError;

/// `masks[t][node]`; every node appears at every step.
pub fn write_trace<W: Write>(masks: &[Vec<bool>], out: W) -> Result<(), BenchError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(["t", "node", "state"])?;
    for (t, mask) in masks.iter().enumerate() {
        for (node, &on) in mask.iter().enumerate() {
            w.write_record([t.to_string(), node.to_string(), u8::from(on).to_string()])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn read_trace<R: Read>(input: R) -> Result<Vec<Vec<bool>>, BenchError> {
    let mut rdr = csv::Reader::from_reader(input);
    let mut masks: Vec<Vec<bool>> = Vec::new();
    for (idx, row) in rdr.records().enumerate() {
        let row = row?;
        let field = |i: usize| -> Result<usize, BenchError> {
            row.get(i)
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| BenchError::Csv(format!("trace row {}: bad field {i}", idx + 2)))
        };
        let (t, node, state) = (field(0)?, field(1)?, field(2)?);
        if state > 1 {
            return Err(BenchError::Csv(format!("trace row {}: state must be 0 or 1", idx + 2)));
        }
        if t == masks.len() {
            masks.push(Vec::new());
        }
        let mask = masks
            .get_mut(t)
            .filter(|m| m.len() == node)
            .ok_or_else(|| BenchError::Csv(format!("trace row {}: rows out of order", idx + 2)))?;
        mask.push(state == 1);
    }
    if masks.windows(2).any(|w| w[0].len() != w[1].len()) {
        return Err(BenchError::Csv("trace steps cover different node counts".into()));
    }
    Ok(masks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let masks = vec![vec![true, false, true], vec![false, false, true]];
        let mut buf = Vec::new();
        write_trace(&masks, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("t,node,state\n0,0,1\n0,1,0\n"));
        assert_eq!(read_trace(text.as_bytes()).unwrap(), masks);
    }

    #[test]
    fn rejects_malformed() {
        assert!(read_trace("t,node,state\n0,1,1\n".as_bytes()).is_err());
        assert!(read_trace("t,node,state\n0,0,2\n".as_bytes()).is_err());
        assert!(read_trace("t,node,state\n0,0,1\n0,1,1\n1,0,1\n".as_bytes()).is_err());
    }
}
