extern void record(int v);

unsigned char table[8];
int last_pos = 0;

void init_table(void) {
    int i;
    for (i = 0; i < 8; i = i + 1) {
        table[i] = (unsigned char)i;
    }
}

void move_to_front(int sym) {
    int j;
    unsigned char found;
    j = 0;
    while ((int)table[j] != sym) {
        j = j + 1;
    }
    found = table[j];
    while (j > 0) {
        table[j] = table[j - 1];
        j = j - 1;
    }
    table[0] = found;
    last_pos = (int)found;
}

int main() {
    int input[6];
    int i;
    int acc;
    input[0] = 3; input[1] = 3; input[2] = 1;
    input[3] = 5; input[4] = 1; input[5] = 3;
    init_table();
    acc = 0;
    for (i = 0; i < 6; i = i + 1) {
        move_to_front(input[i]);
        record(last_pos);
        acc = acc * 7 + last_pos;
    }
    return acc % 251;
}
