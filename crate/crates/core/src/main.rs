fn main() {
    println!("psmac CLI under construction");
}
