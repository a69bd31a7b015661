#pragma once

// Reference decks used across the suites: a KiCad LC output filter, a
// two-branch current-mirror style circuit, and a nine-channel BJT level
// shifter bank.

inline const char* kLcFilterDeck =
    ".title KiCad schematic\n"
    "C1 Net-_C1-Pad1_ NC_01 1000p\n"
    "L1 Output Net-_C1-Pad1_ 10u\n"
    "R1 Output GND 330\n"
    ".end\n";

inline const char* kCircuit806Deck =
    "*SPICE Netlist for circuit 806\n"
    "I1 4 0 DC 1mA\n"
    "I2 3 0 DC 1mA\n"
    "R1 1 VDD 1k\n"
    "M2 1 7 4 4 NMOS W=1u L=1u\n"
    "R2 2 VDD 1k\n"
    "M1 2 8 3 3 NMOS W=1u L=1u\n"
    "R3 4 3 1k\n"
    ".MODEL NMOS NMOS (LEVEL=1 VTO=1 KP=1.0e-4 LAMBDA=0.02)\n"
    "\n"
    ".OP\n"
    ".END\n";

inline const char* kLevelShifterDeck =
    ".title KiCad schematic\n"
    "R2 RPI_19 3.3V 10k\n"
    "Q1 D7 3.3V RPI_19 BS170\n"
    "R1 D7 5V 10k\n"
    "R4 RPI_18 3.3V 10k\n"
    "Q2 D6 3.3V RPI_18 BS170\n"
    "R3 D6 5V 10k\n"
    "R6 RPI_17 3.3V 10k\n"
    "Q3 D5 3.3V RPI_17 BS170\n"
    "R5 D5 5V 10k\n"
    "R8 RPI_16 3.3V 10k\n"
    "Q4 D4 3.3V RPI_16 BS170\n"
    "R7 D4 5V 10k\n"
    "R10 RPI_15 3.3V 10k\n"
    "Q5 D3 3.3V RPI_15 BS170\n"
    "R9 D3 5V 10k\n"
    "R12 RPI_14 3.3V 10k\n"
    "Q6 D2 3.3V RPI_14 BS170\n"
    "R11 D2 5V 10k\n"
    "R14 RPI_13 3.3V 10k\n"
    "Q7 D1 3.3V RPI_13 BS170\n"
    "R13 D1 5V 10k\n"
    "R16 RPI_12 3.3V 10k\n"
    "Q8 D0 3.3V RPI_12 BS170\n"
    "R15 D0 5V 10k\n"
    "R18 RPI_10 3.3V 10k\n"
    "Q9 RPI_SEL 3.3V RPI_10 BS170\n"
    "R17 RPI_SEL 5V 10k\n"
    ".end\n";
