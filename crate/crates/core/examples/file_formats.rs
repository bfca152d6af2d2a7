//! Text and JSON round trips and an absorber listing.

use hyperthresh::io::{parse_absorber_stream, parse_any, to_json, to_text, write_absorber_block};
use hyperthresh::{Hypergraph, VertexSet};

fn main() -> hyperthresh::Result<()> {
    let h = Hypergraph::complete(5, 3)?;
    let text = to_text(&h);
    let json = to_json(&h);
    assert_eq!(to_text(&parse_any(&text)?), text);
    assert_eq!(to_json(&parse_any(&json)?), json);
    print!("{text}");
    println!("{json}");

    let mut stream = String::new();
    let q = VertexSet::from_indices([0, 1, 2])?;
    write_absorber_block(&mut stream, 6, q, 3, &[VertexSet::from_indices([3, 4, 5])?]);
    print!("{stream}");
    let blocks = parse_absorber_stream(&stream)?;
    println!("parsed {} block(s), first targets {}", blocks.len(), blocks[0].target);
    Ok(())
}
