int slots[4];
int *cur;
int push(int v) {
    *cur = v;
    cur = cur + 1;
    return v;
}
int main() {
    int s;
    int i;
    cur = &slots[0];
    push(4);
    push(9);
    push(16);
    s = 0;
    for (i = 0; i < 3; i = i + 1) {
        s = s + slots[i];
    }
    return s + (cur == &slots[3] ? 1000 : 0);
}
