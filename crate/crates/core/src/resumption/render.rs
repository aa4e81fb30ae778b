use super::{Behaviour, Node, SemanticsError};
use crate::syntax::Value;

/// Renders the first `depth` layers of a behaviour, e.g.
/// `δ.out 3.in{0↦ret {x=0},1↦…}`. Every head costs one layer; `…` marks
/// the cut.
pub fn render<B: Behaviour>(b: &B, depth: usize, inputs: &[Value]) -> Result<String, SemanticsError> {
    let mut out = String::new();
    go(b, depth, inputs, &mut out)?;
    Ok(out)
}

fn go<B: Behaviour>(
    b: &B,
    depth: usize,
    inputs: &[Value],
    out: &mut String,
) -> Result<(), SemanticsError> {
    let mut cur = b.clone();
    let mut depth = depth;
    loop {
        if depth == 0 {
            out.push('…');
            return Ok(());
        }
        depth -= 1;
        match cur.node()? {
            Node::Ret(s) => {
                out.push_str(&format!("ret {s}"));
                return Ok(());
            }
            Node::BlackHole => {
                out.push('•');
                return Ok(());
            }
            Node::Delay(t) => {
                out.push_str("δ.");
                cur = t;
            }
            Node::Out(v, t) => {
                out.push_str(&format!("out {v}."));
                cur = t;
            }
            Node::In(f) => {
                out.push_str("in{");
                for (i, v) in inputs.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    out.push_str(&format!("{v}↦"));
                    go(&f(v), depth, inputs, out)?;
                }
                out.push('}');
                return Ok(());
            }
        }
    }
}
