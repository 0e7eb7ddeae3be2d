use flashvault::bce::{load_cipher, CipherId};

fn main() {
    for id in CipherId::ALL {
        let (p, _) = load_cipher(id, &vec![1u8; id.key_lengths()[0]]).unwrap();
        println!(
            "{:9} rounds {:2} per_round {:4} overhead {:4} block {:5} enc_instr {:5}",
            id.name(), p.spec.rounds, p.cycles_per_round, p.overhead_cycles, p.block_cycles(), p.encrypt.len()
        );
    }
}
