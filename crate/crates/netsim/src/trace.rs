use std::collections::BTreeMap;
use std::io::{self, Write};

use serde::{Deserialize, Serialize};

/// One trace line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    /// Simulation time (s).
    pub t: f64,
    /// Node id.
    pub node: u32,
    pub kind: String,
    pub channel: Option<usize>,
    pub detail: String,
}

/// Frame outcomes and protocol counters for one run.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct LinkMetrics {
    pub frames_sent: u64,
    pub delivered: u64,
    pub collisions: u64,
    pub deafness_misses: u64,
    /// Clean, listening receiver but SNR under the threshold.
    pub below_threshold: u64,
    /// Sent frames whose reception was still undecided at the end of the run.
    pub in_flight: u64,
    pub data_delivered: u64,
    /// DATA frames abandoned after the retry limit.
    pub dropped: u64,
    pub handshakes: u64,
    /// Mean time from the start of a successful attempt to its DATA
    /// transmission (s); null when no handshake completed.
    pub mean_handshake_latency: Option<f64>,
    /// Delivered DATA bits over the scenario duration (bit/s).
    pub throughput_bps: f64,
    pub reconfigurations: u64,
    /// Sum of controller latencies over all reconfigurations (s).
    pub reconfiguration_time: f64,
    /// Reconfigurations per node id.
    pub reconfigurations_by_node: BTreeMap<u32, u64>,
}

impl LinkMetrics {
    /// Every sent frame has exactly one outcome or is still in flight.
    pub fn accounting_holds(&self) -> bool {
        self.delivered
            + self.collisions
            + self.deafness_misses
            + self.below_threshold
            + self.in_flight
            == self.frames_sent
    }
}

pub fn write_trace_jsonl<W: Write>(mut w: W, trace: &[TraceRecord]) -> io::Result<()> {
    for r in trace {
        serde_json::to_writer(&mut w, r)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

pub fn write_metrics_json<W: Write>(mut w: W, m: &LinkMetrics) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut w, m)?;
    w.write_all(b"\n")
}

/// Checks that no data channel is assigned while a previous assignment of
/// the same channel is still open.
pub fn audit_channel_exclusivity(trace: &[TraceRecord]) -> Result<(), String> {
    let mut open: BTreeMap<usize, (f64, String)> = BTreeMap::new();
    for r in trace {
        let Some(ch) = r.channel else { continue };
        match r.kind.as_str() {
            "assign" => {
                if let Some((t, who)) = open.get(&ch) {
                    return Err(format!(
                        "channel {ch} assigned at t={} ({}) while held since t={t} ({who})",
                        r.t, r.detail
                    ));
                }
                open.insert(ch, (r.t, r.detail.clone()));
            }
            "release" if open.remove(&ch).is_none() => {
                return Err(format!(
                    "channel {ch} released at t={} without assignment",
                    r.t
                ));
            }
            _ => {}
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(t: f64, kind: &str, ch: usize) -> TraceRecord {
        TraceRecord {
            t,
            node: 0,
            kind: kind.into(),
            channel: Some(ch),
            detail: String::new(),
        }
    }

    #[test]
    fn audit_catches_double_booking() {
        let ok = [
            rec(0.0, "assign", 1),
            rec(1.0, "release", 1),
            rec(2.0, "assign", 1),
        ];
        assert!(audit_channel_exclusivity(&ok).is_ok());
        let two = [
            rec(0.0, "assign", 1),
            rec(0.5, "assign", 2),
            rec(1.0, "release", 2),
        ];
        assert!(audit_channel_exclusivity(&two).is_ok());
        let bad = [rec(0.0, "assign", 1), rec(0.5, "assign", 1)];
        assert!(audit_channel_exclusivity(&bad).is_err());
    }

    #[test]
    fn jsonl_shape() {
        let mut buf = Vec::new();
        write_trace_jsonl(&mut buf, &[rec(2.5e-9, "assign", 3)]).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "{\"t\":2.5e-9,\"node\":0,\"kind\":\"assign\",\"channel\":3,\"detail\":\"\"}\n"
        );
    }
}
