unsigned char nondet_uchar(void);

int main(void)
{
    int table[4] = {1, 2, 3, 4};
    unsigned char i = nondet_uchar();
    return table[i];
}
