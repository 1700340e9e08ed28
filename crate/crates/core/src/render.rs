use std::fmt::Write;

use crate::engine::GameState;

fn cell(s: &GameState, id: usize) -> char {
    let cop = s.cops.contains(&id);
    let robber = s.robber == Some(id);
    match (cop, robber) {
        (true, true) => 'X',
        (true, false) => 'C',
        (false, true) => 'R',
        (false, false) => '·',
    }
}

/// Text picture of a position. Two-dimensional graphs draw coordinate 0 as the
/// column and coordinate 1 as the row; three-dimensional graphs draw one such
/// plane per value of coordinate 2. Anything else is listed by coordinates.
pub fn render_ascii(s: &GameState) -> String {
    let g = &s.graph;
    let mut out = String::new();
    match g.dimension() {
        1 => {
            for id in 0..g.vertex_count() {
                out.push(cell(s, id));
            }
        }
        2 | 3 => {
            let planes = if g.dimension() == 3 { g.len(2) } else { 1 };
            for z in 0..planes {
                if g.dimension() == 3 {
                    if z > 0 {
                        out.push('\n');
                    }
                    writeln!(out, "z={z}").unwrap();
                }
                for y in 0..g.len(1) {
                    if y > 0 {
                        out.push('\n');
                    }
                    for x in 0..g.len(0) {
                        let mut coords = vec![x, y];
                        if g.dimension() == 3 {
                            coords.push(z);
                        }
                        out.push(cell(s, g.index(&crate::graph::Vertex(coords))));
                    }
                }
            }
        }
        _ => {
            let cops: Vec<String> = s.cop_vertices().iter().map(|v| v.to_string()).collect();
            write!(out, "cops: {}", cops.join(" ")).unwrap();
            match s.robber_vertex() {
                Some(r) => write!(out, "\nrobber: {r}").unwrap(),
                None => out.push_str("\nrobber: unplaced"),
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::Phase;
    use crate::graph::{GraphSpec, Vertex};
    use std::sync::Arc;

    fn at(g: &str, cops: &[Vertex], robber: Option<Vertex>) -> GameState {
        let g: GraphSpec = g.parse().unwrap();
        let cops = cops.iter().map(|c| g.index(c)).collect();
        let robber = robber.map(|r| g.index(&r));
        GameState {
            graph: Arc::new(g),
            cops,
            robber,
            phase: Phase::CopTurn,
            round: 1,
        }
    }

    #[test]
    fn single_cell() {
        assert_eq!(
            render_ascii(&at("grid:1x1", &[Vertex::from([0, 0])], None)),
            "C"
        );
    }

    #[test]
    fn two_by_two() {
        let s = at(
            "grid:2x2",
            &[Vertex::from([0, 0])],
            Some(Vertex::from([1, 1])),
        );
        assert_eq!(render_ascii(&s), "C·\n·R");
    }

    #[test]
    fn colocated_shows_x() {
        let s = at(
            "grid:3x3",
            &[Vertex::from([1, 1])],
            Some(Vertex::from([1, 1])),
        );
        assert_eq!(render_ascii(&s).lines().nth(1).unwrap(), "·X·");
    }

    #[test]
    fn three_d_by_planes() {
        let s = at("grid:2x2x2", &[Vertex::from([0, 0, 1])], None);
        assert_eq!(render_ascii(&s), "z=0\n··\n··\nz=1\nC·\n··");
    }

    #[test]
    fn higher_dimensions_list_coordinates() {
        let s = at(
            "cube:4",
            &[Vertex::from([0, 1, 0, 0])],
            Some(Vertex::from([1, 1, 1, 1])),
        );
        assert_eq!(render_ascii(&s), "cops: (0,1,0,0)\nrobber: (1,1,1,1)");
    }
}
