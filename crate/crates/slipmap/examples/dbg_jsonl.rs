fn main() {
    use slipmap::eval::dataset::*;
    use slipmap::terrain::default_catalog;
    let catalog = default_catalog();
    let spec = DatasetSpec { n_trajectories: 4, total_samples: 600, duration_s: 20.0, ..DatasetSpec::default() };
    let dataset = generate_dataset(&spec, &catalog, 3).unwrap();
    let text = records_to_jsonl(&dataset.test).unwrap();
    println!("first line: {}", text.lines().next().unwrap());
    let back = records_from_jsonl(&text, SplitRole::Test).unwrap();
    let flat_a: Vec<&slipmap::rover::SlipSample> = dataset.test.iter().flat_map(|r| &r.samples).collect();
    let flat_b: Vec<&slipmap::rover::SlipSample> = back.iter().flat_map(|r| &r.samples).collect();
    println!("counts {} {}", flat_a.len(), flat_b.len());
    for (i, (a, b)) in flat_a.iter().zip(&flat_b).enumerate() {
        if a != b {
            println!("first mismatch at {i}:\n  a = {a:?}\n  b = {b:?}");
            break;
        }
    }
}
